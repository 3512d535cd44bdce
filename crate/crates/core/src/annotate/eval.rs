use std::collections::{HashMap, HashSet};

use super::store::StoredAnnotation;
use super::Task;
use crate::error::{Error, Result};

/// Accuracy of `predictions` against `gold` for one task: token-level for
/// metaphor labels, sentence-level for sentiment. Both sides must cover the
/// same ids with the same token counts.
pub fn eval_annotator(gold: &[StoredAnnotation], predictions: &[StoredAnnotation], task: Task) -> Result<f64> {
    let gold: Vec<&StoredAnnotation> = gold.iter().filter(|a| a.task() == task).collect();
    let predicted: HashMap<&str, &StoredAnnotation> = predictions
        .iter()
        .filter(|a| a.task() == task)
        .map(|a| (a.id(), a))
        .collect();
    if gold.is_empty() {
        return Err(Error::InvalidArgument(format!("no gold {} annotations", task.as_str())));
    }

    let (mut correct, mut total) = (0usize, 0usize);
    for g in &gold {
        let p = predicted.get(g.id()).ok_or_else(|| Error::Alignment {
            id: g.id().to_string(),
            message: "no prediction".into(),
        })?;
        match (g, p) {
            (StoredAnnotation::Metaphor { labels: gl, .. }, StoredAnnotation::Metaphor { labels: pl, .. }) => {
                if gl.len() != pl.len() {
                    return Err(Error::Alignment {
                        id: g.id().to_string(),
                        message: format!("{} gold labels vs {} predicted", gl.len(), pl.len()),
                    });
                }
                correct += gl.iter().zip(pl).filter(|(a, b)| a == b).count();
                total += gl.len();
            }
            (StoredAnnotation::Sentiment { sentiment: gs, .. }, StoredAnnotation::Sentiment { sentiment: ps, .. }) => {
                correct += usize::from(gs == ps);
                total += 1;
            }
            _ => unreachable!("both sides filtered to one task"),
        }
    }

    let gold_ids: HashSet<&str> = gold.iter().map(|g| g.id()).collect();
    if let Some(extra) = predictions
        .iter()
        .filter(|a| a.task() == task)
        .find(|a| !gold_ids.contains(a.id()))
    {
        return Err(Error::Alignment {
            id: extra.id().to_string(),
            message: "prediction without gold".into(),
        });
    }
    if total == 0 {
        return Err(Error::InvalidArgument("gold annotations contain no tokens".into()));
    }
    Ok(correct as f64 / total as f64)
}
