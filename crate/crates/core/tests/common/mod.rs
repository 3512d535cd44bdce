//! Synthetic corpus with planted pair rates, norm scores, sentiment and
//! subject person, plus the values the pipeline must recover from it.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use metaverify::annotate::Sentiment;
use metaverify::corpus::PersonClass;
use metaverify::norms::Norm;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SELECTED: [&str; 10] = [
    "attack", "break", "catch", "draw", "grasp", "kill", "open", "pour", "raise", "win",
];
/// Fails the transitivity criterion.
pub const INTRANSITIVE_HEAVY: &str = "run";
/// Has exactly 10 literal pairs, one short of the minimum.
pub const TOO_FEW_LITERAL: &str = "hold";
pub const FILLER: &str = "sleep";
pub const GROUP_SIZE: usize = 800;
pub const SENTENCES: usize = 5_000;

/// Metaphorical sentences per group, in `GroupKey::ALL` order:
/// positive/first, positive/third, neutral/first, neutral/third,
/// negative/first, negative/third.
pub const GROUP_METAPHORS: [usize; 6] = [400, 400, 200, 200, 500, 300];
const OTHER_PERSON: (usize, usize) = (100, 100);

const GROUP_ORDER: [(Sentiment, PersonClass); 6] = [
    (Sentiment::Positive, PersonClass::First),
    (Sentiment::Positive, PersonClass::Third),
    (Sentiment::Neutral, PersonClass::First),
    (Sentiment::Neutral, PersonClass::Third),
    (Sentiment::Negative, PersonClass::First),
    (Sentiment::Negative, PersonClass::Third),
];

#[derive(Debug, Clone)]
struct Item {
    verb: String,
    object: Option<String>,
    metaphorical: bool,
}

/// Scores (concreteness, imageability, complexity) of one object.
type Scores = (f64, f64, f64);

#[derive(Debug, Clone, Default)]
pub struct Expected {
    pub selected: Vec<String>,
    /// (verb, norm, metaphorical usage) -> type-weighted mean.
    pub means: BTreeMap<(String, Norm, bool), f64>,
    /// (verb, norm, metaphorical usage) -> distinct covered pairs.
    pub pair_counts: BTreeMap<(String, Norm, bool), usize>,
    pub agreeing: BTreeMap<Norm, usize>,
    /// (sentiment, person) -> (metaphorical sentences, sentences).
    pub groups: BTreeMap<(Sentiment, PersonClass), (usize, usize)>,
}

pub struct Synthetic {
    pub conllu: String,
    pub concreteness: String,
    pub imageability: String,
    pub complexity: String,
    pub sentiment_lexicon: String,
    pub wordlist: Vec<String>,
    pub expected: Expected,
}

fn met_surface(verb: &str) -> String {
    format!("{verb}ed")
}

fn lit_surface(verb: &str) -> String {
    format!("{verb}s")
}

/// Quarter-step scores keep every sum exact in binary floating point.
fn object_scores(v: usize, i: usize, metaphorical: bool) -> Scores {
    let step = 0.25 * (i % 4) as f64;
    let offset = 0.25 * (v % 3) as f64;
    let conc = if metaphorical { 1.0 } else { 3.0 } + step + offset;
    // verb 0: imageability reversed
    let imag_met = v != 0;
    let imag = if metaphorical == imag_met { 2.0 } else { 3.5 } + step;
    // verb 1: familiarity tied, verb 2: reversed
    let comp = match (v, metaphorical) {
        (1, _) => 3.0,
        (2, true) => 2.0,
        (2, false) => 4.0,
        (_, true) => 4.0,
        (_, false) => 2.0,
    } + step;
    (conc, imag, comp)
}

fn push_pairs(items: &mut Vec<Item>, verb: &str, object: &str, total: usize, metaphorical: usize) {
    for k in 0..total {
        items.push(Item {
            verb: verb.into(),
            object: Some(object.into()),
            metaphorical: k < metaphorical,
        });
    }
}

pub fn generate(seed: u64) -> Synthetic {
    let mut items: Vec<Item> = Vec::new();
    let mut scores: BTreeMap<String, Scores> = BTreeMap::new();
    let mut expected = Expected::default();
    let mut sums: BTreeMap<(String, Norm, bool), (f64, usize)> = BTreeMap::new();

    for (v, verb) in SELECTED.iter().enumerate() {
        for i in 0..12 {
            for metaphorical in [true, false] {
                let object = format!("{verb}_{}{i}", if metaphorical { 'm' } else { 'l' });
                let s = object_scores(v, i, metaphorical);
                scores.insert(object.clone(), s);
                let (total, met) = if metaphorical { (10, 8) } else { (10, 2) };
                push_pairs(&mut items, verb, &object, total, met);
                for (norm, value) in [
                    (Norm::Concreteness, s.0),
                    (Norm::Imageability, s.1),
                    (Norm::Familiarity, 6.0 - s.2),
                ] {
                    let e = sums.entry((verb.to_string(), norm, metaphorical)).or_default();
                    e.0 += value;
                    e.1 += 1;
                }
            }
        }
        // exactly 70% metaphorical: ambiguous, dropped
        let amb = format!("{verb}_amb");
        scores.insert(amb.clone(), (2.5, 2.5, 2.5));
        push_pairs(&mut items, verb, &amb, 10, 7);
        // metaphorical but absent from every norm table
        push_pairs(&mut items, verb, &format!("{verb}_oov"), 10, 9);
    }
    expected.selected = SELECTED.iter().map(|s| s.to_string()).collect();
    for ((verb, norm, metaphorical), (sum, n)) in &sums {
        expected.means.insert((verb.clone(), *norm, *metaphorical), sum / *n as f64);
        expected.pair_counts.insert((verb.clone(), *norm, *metaphorical), *n);
    }
    for norm in Norm::ALL {
        let agree = SELECTED
            .iter()
            .filter(|v| {
                expected.means[&(v.to_string(), norm, true)] < expected.means[&(v.to_string(), norm, false)]
            })
            .count();
        expected.agreeing.insert(norm, agree);
    }

    for (verb, met_pairs, lit_pairs) in [(INTRANSITIVE_HEAVY, 12, 12), (TOO_FEW_LITERAL, 11, 10)] {
        for i in 0..met_pairs {
            let object = format!("{verb}_m{i}");
            scores.insert(object.clone(), (1.5, 2.5, 4.5));
            push_pairs(&mut items, verb, &object, 10, 8);
        }
        for i in 0..lit_pairs {
            let object = format!("{verb}_l{i}");
            scores.insert(object.clone(), (4.0, 4.0, 2.0));
            push_pairs(&mut items, verb, &object, 10, 2);
        }
    }
    for _ in 0..200 {
        items.push(Item {
            verb: INTRANSITIVE_HEAVY.into(),
            object: None,
            metaphorical: false,
        });
    }

    let planted: usize = GROUP_METAPHORS.iter().sum::<usize>() + OTHER_PERSON.0;
    let transitive_met = items.iter().filter(|i| i.metaphorical).count();
    let filler = SENTENCES - items.len();
    let filler_met = planted - transitive_met;
    for k in 0..filler {
        items.push(Item {
            verb: FILLER.into(),
            object: None,
            metaphorical: k < filler_met,
        });
    }
    assert_eq!(items.len(), SENTENCES);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut met, mut lit): (Vec<Item>, Vec<Item>) = items.into_iter().partition(|i| i.metaphorical);
    met.shuffle(&mut rng);
    lit.shuffle(&mut rng);

    let mut slots: Vec<(Item, Sentiment, PersonClass)> = Vec::with_capacity(SENTENCES);
    for (&(sentiment, person), &m) in GROUP_ORDER.iter().zip(&GROUP_METAPHORS) {
        for _ in 0..m {
            slots.push((met.pop().unwrap(), sentiment, person));
        }
        for _ in 0..GROUP_SIZE - m {
            slots.push((lit.pop().unwrap(), sentiment, person));
        }
        expected.groups.insert((sentiment, person), (m, GROUP_SIZE));
    }
    let sentiments = [Sentiment::Positive, Sentiment::Neutral, Sentiment::Negative];
    for k in 0..OTHER_PERSON.0 {
        slots.push((met.pop().unwrap(), sentiments[k % 3], PersonClass::Other));
    }
    for k in 0..OTHER_PERSON.1 {
        slots.push((lit.pop().unwrap(), sentiments[k % 3], PersonClass::Other));
    }
    assert!(met.is_empty() && lit.is_empty());
    slots.shuffle(&mut rng);

    let mut conllu = String::new();
    for (n, (item, sentiment, person)) in slots.iter().enumerate() {
        let subject = match (person, n % 3) {
            (PersonClass::First, k) => ["I", "we", "I"][k],
            (PersonClass::Third, k) => ["he", "she", "they"][k],
            (PersonClass::Other, k) => ["you", "it", "you"][k],
        };
        let adjective = match sentiment {
            Sentiment::Positive => "good",
            Sentiment::Neutral => "big",
            Sentiment::Negative => "bad",
        };
        let surface = if item.metaphorical {
            met_surface(&item.verb)
        } else {
            lit_surface(&item.verb)
        };
        let _ = writeln!(conllu, "# sent_id = syn-{n}");
        let _ = writeln!(conllu, "1\t{subject}\t{}\tPRON\t_\t_\t2\tnsubj\t_\t_", subject.to_lowercase());
        let _ = writeln!(conllu, "2\t{surface}\t{}\tVERB\t_\t_\t0\troot\t_\t_", item.verb);
        match &item.object {
            Some(object) => {
                let _ = writeln!(conllu, "3\tthe\tthe\tDET\t_\t_\t5\tdet\t_\t_");
                let _ = writeln!(conllu, "4\t{adjective}\t{adjective}\tADJ\t_\t_\t5\tamod\t_\t_");
                let _ = writeln!(conllu, "5\t{object}\t{object}\tNOUN\t_\t_\t2\tobj\t_\t_");
            }
            None => {
                let _ = writeln!(conllu, "3\tin\tin\tADP\t_\t_\t5\tcase\t_\t_");
                let _ = writeln!(conllu, "4\t{adjective}\t{adjective}\tADJ\t_\t_\t5\tamod\t_\t_");
                let _ = writeln!(conllu, "5\thouse\thouse\tNOUN\t_\t_\t2\tobl\t_\t_");
            }
        }
        let _ = writeln!(conllu, "6\t.\t.\tPUNCT\t_\t_\t2\tpunct\t_\t_\n");
    }

    let table = |pick: fn(&Scores) -> f64| {
        scores
            .iter()
            .map(|(w, s)| format!("{w}\t{}\n", pick(s)))
            .collect::<String>()
    };
    let mut wordlist: Vec<String> = SELECTED
        .iter()
        .chain(&[INTRANSITIVE_HEAVY, TOO_FEW_LITERAL, FILLER])
        .map(|v| met_surface(v))
        .collect();
    wordlist.sort();
    Synthetic {
        conllu,
        concreteness: format!("word\tconcreteness\n{}", table(|s| s.0)),
        imageability: format!("word\timageability\n{}", table(|s| s.1)),
        complexity: format!("word\tcomplexity\n{}", table(|s| s.2)),
        sentiment_lexicon: "good\tP\nbad\tN\n".into(),
        wordlist,
        expected,
    }
}

/// Writes the corpus, resources and a configuration file into `dir`.
/// Returns the configuration path.
pub fn write_fixture(dir: &Path, synthetic: &Synthetic, extra_config: &str) -> PathBuf {
    let file = |name: &str, text: &str| {
        let path = dir.join(name);
        std::fs::write(&path, text).unwrap();
        path
    };
    let corpus = file("corpus.conllu", &synthetic.conllu);
    let conc = file("concreteness.tsv", &synthetic.concreteness);
    let imag = file("imageability.tsv", &synthetic.imageability);
    let comp = file("complexity.tsv", &synthetic.complexity);
    let sent = file("sentiment.tsv", &synthetic.sentiment_lexicon);
    let words = file("wordlist.txt", &(synthetic.wordlist.join("\n") + "\n"));
    let config = format!(
        "# synthetic run\n\
         inputs = {}\n\
         workdir = {}\n\
         metaphor_annotator = external:{} --wordlist-file {}\n\
         sentiment_annotator = lexicon:{}\n\
         concreteness = {}\n\
         imageability = {}\n\
         complexity = {}\n\
         per_group_n = {GROUP_SIZE}\n\
         seed = 42\n\
         {extra_config}",
        corpus.display(),
        dir.join("run").display(),
        echo_binary().display(),
        words.display(),
        sent.display(),
        conc.display(),
        imag.display(),
        comp.display(),
    );
    file("run.conf", &config)
}

pub fn cli_binary() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_metaverify"))
}

pub fn echo_binary() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_metaverify-echo"))
}

pub fn metaverify(args: &[&str]) -> Output {
    Command::new(cli_binary())
        .args(args)
        .env_remove(metaverify::config::SEED_ENV)
        .output()
        .expect("run metaverify")
}

pub const STAGES: [&str; 8] = [
    "extract", "annotate", "pairs", "verbs", "claims-abc", "groups", "claims-de", "report",
];

/// Runs every stage with the given leading arguments; panics with the
/// stage's stderr on failure.
pub fn run_pipeline(leading: &[&str]) {
    for stage in STAGES {
        let mut args: Vec<&str> = leading.to_vec();
        args.push(stage);
        let out = metaverify(&args);
        assert!(
            out.status.success(),
            "{stage} failed ({:?}): {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        );
    }
}
