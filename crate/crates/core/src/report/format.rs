//! Number formatting shared by every table.

/// Rounds half away from zero at `decimals` places, working on the shortest
/// decimal representation of `x` so that e.g. `2.675` becomes `2.68`.
pub fn round_half_away(x: f64, decimals: usize) -> String {
    if !x.is_finite() {
        return "NA".into();
    }
    let text = format!("{}", x.abs());
    let (int_part, frac_part) = text.split_once('.').unwrap_or((&text, ""));
    let mut digits: Vec<u8> = int_part.bytes().map(|b| b - b'0').collect();
    let int_len = digits.len();
    let frac: Vec<u8> = frac_part.bytes().map(|b| b - b'0').collect();
    digits.extend(frac.iter().take(decimals));
    digits.resize(int_len + decimals, 0);
    if frac.get(decimals).is_some_and(|&d| d >= 5) {
        let mut i = digits.len();
        loop {
            if i == 0 {
                digits.insert(0, 1);
                break;
            }
            i -= 1;
            if digits[i] == 9 {
                digits[i] = 0;
            } else {
                digits[i] += 1;
                break;
            }
        }
    }
    let split = digits.len() - decimals;
    let int_str: String = digits[..split].iter().map(|d| char::from(b'0' + d)).collect();
    let frac_str: String = digits[split..].iter().map(|d| char::from(b'0' + d)).collect();
    let zero = digits.iter().all(|&d| d == 0);
    let sign = if x < 0.0 && !zero { "-" } else { "" };
    if decimals == 0 {
        format!("{sign}{int_str}")
    } else {
        format!("{sign}{int_str}.{frac_str}")
    }
}

/// Values below this print as `<0.0001`.
pub const P_FLOOR: f64 = 0.0001;

pub fn format_p(p: f64) -> String {
    if p < P_FLOOR {
        "<0.0001".into()
    } else {
        round_half_away(p, 4)
    }
}

pub fn format_norm(x: f64) -> String {
    round_half_away(x, 2)
}

pub fn format_mur(x: f64) -> String {
    round_half_away(x, 3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn half_away_from_zero() {
        assert_eq!(round_half_away(2.675, 2), "2.68");
        assert_eq!(round_half_away(-2.675, 2), "-2.68");
        assert_eq!(round_half_away(0.8625, 3), "0.863");
        assert_eq!(round_half_away(0.8845, 3), "0.885");
        assert_eq!(round_half_away(-0.0225, 3), "-0.023");
        assert_eq!(round_half_away(9.995, 2), "10.00");
        assert_eq!(round_half_away(0.0, 2), "0.00");
        assert_eq!(round_half_away(-0.001, 2), "0.00");
        assert_eq!(round_half_away(3.0, 2), "3.00");
        assert_eq!(round_half_away(1e-7, 4), "0.0000");
        assert_eq!(round_half_away(123.456, 0), "123");
        assert_eq!(round_half_away(f64::NAN, 2), "NA");
    }

    #[test]
    fn p_floor() {
        assert_eq!(format_p(3e-6), "<0.0001");
        assert_eq!(format_p(0.0337), "0.0337");
        assert_eq!(format_p(0.0001), "0.0001");
        assert_eq!(format_p(1.0), "1.0000");
    }

    proptest! {
        #[test]
        fn close_to_input(x in -1000.0f64..1000.0, d in 0usize..6) {
            let r: f64 = round_half_away(x, d).parse().unwrap();
            prop_assert!((r - x).abs() <= 0.5 * 10f64.powi(-(d as i32)) + 1e-9);
        }
    }
}
