//! Grid flag values: `x`, `a,b,c` or inclusive ranges `lo..hi[:step]`.
//! Real values also accept fractions such as `1/8`.

use std::str::FromStr;

pub trait GridValue: Copy + PartialOrd {
    fn parse_one(s: &str) -> Result<Self, String>;
    fn expand(lo: Self, hi: Self, step: Option<Self>) -> Result<Vec<Self>, String>;
}

impl GridValue for usize {
    fn parse_one(s: &str) -> Result<Self, String> {
        usize::from_str(s).map_err(|_| format!("`{s}` is not a non-negative integer"))
    }

    fn expand(lo: Self, hi: Self, step: Option<Self>) -> Result<Vec<Self>, String> {
        let step = step.unwrap_or(1);
        if step == 0 {
            return Err("range step must be positive".into());
        }
        Ok((lo..=hi).step_by(step).collect())
    }
}

impl GridValue for f64 {
    fn parse_one(s: &str) -> Result<Self, String> {
        let value = match s.split_once('/') {
            Some((num, den)) => {
                let num =
                    f64::from_str(num.trim()).map_err(|_| format!("`{s}` is not a number"))?;
                let den =
                    f64::from_str(den.trim()).map_err(|_| format!("`{s}` is not a number"))?;
                num / den
            }
            None => f64::from_str(s).map_err(|_| format!("`{s}` is not a number"))?,
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(format!("`{s}` is not a finite number"))
        }
    }

    fn expand(lo: Self, hi: Self, step: Option<Self>) -> Result<Vec<Self>, String> {
        let step = step.unwrap_or(1.0);
        if !step.is_finite() || step <= 0.0 {
            return Err("range step must be positive".into());
        }
        let count = ((hi - lo) / step + 1e-9).floor();
        if count > 1e6 {
            return Err("range has too many points".into());
        }
        // drop accumulated binary noise, e.g. 0.1 + 2 * 0.1 -> 0.3
        let tidy = |v: f64| format!("{v:.12e}").parse::<f64>().unwrap_or(v);
        Ok((0..=count as usize)
            .map(|k| tidy(lo + k as f64 * step))
            .collect())
    }
}

pub fn parse_grid<T: GridValue>(spec: &str) -> Result<Vec<T>, String> {
    let mut values = Vec::new();
    for item in spec.split(',').map(str::trim) {
        if item.is_empty() {
            return Err(format!("empty item in `{spec}`"));
        }
        match item.split_once("..") {
            Some((lo, rest)) => {
                let (hi, step) = match rest.split_once(':') {
                    Some((hi, step)) => (hi, Some(T::parse_one(step.trim())?)),
                    None => (rest, None),
                };
                let (lo, hi) = (T::parse_one(lo.trim())?, T::parse_one(hi.trim())?);
                if hi < lo {
                    return Err(format!("range `{item}` is decreasing"));
                }
                values.extend(T::expand(lo, hi, step)?);
            }
            None => values.push(T::parse_one(item)?),
        }
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_grids() {
        assert_eq!(parse_grid::<usize>("5").unwrap(), vec![5]);
        assert_eq!(parse_grid::<usize>("1..4").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_grid::<usize>("2..9:3").unwrap(), vec![2, 5, 8]);
        assert_eq!(parse_grid::<usize>("1,3..4").unwrap(), vec![1, 3, 4]);
        assert!(parse_grid::<usize>("4..1").is_err());
        assert!(parse_grid::<usize>("1..4:0").is_err());
        assert!(parse_grid::<usize>("-1").is_err());
        assert!(parse_grid::<usize>("1,,2").is_err());
    }

    #[test]
    fn real_grids() {
        assert_eq!(
            parse_grid::<f64>("1/8,1/4,0.5,1").unwrap(),
            vec![0.125, 0.25, 0.5, 1.0]
        );
        assert_eq!(
            parse_grid::<f64>("1..2:0.25").unwrap(),
            vec![1.0, 1.25, 1.5, 1.75, 2.0]
        );
        assert_eq!(
            parse_grid::<f64>("0.1..0.3:0.1").unwrap(),
            vec![0.1, 0.2, 0.3]
        );
        assert!(parse_grid::<f64>("abc").is_err());
        assert!(parse_grid::<f64>("1/0").is_err());
    }
}
