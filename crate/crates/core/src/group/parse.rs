//! Group shorthand: `Z/4 + Z + Z/2^3`, `0`, or a JSON presentation.

use num_bigint::BigInt;
use num_traits::Zero;

use super::PresentedGroup;
use crate::error::{Error, Result};

pub(super) fn parse_group(s: &str) -> Result<PresentedGroup> {
    let s = s.trim();
    if s.starts_with('{') {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        return PresentedGroup::from_json(&v);
    }
    let mut factors = Vec::new();
    for term in s.split(['+', '⊕']) {
        factors.extend(parse_term(term)?);
    }
    Ok(PresentedGroup::from_big_factors(&factors))
}

fn parse_term(term: &str) -> Result<Vec<BigInt>> {
    let t: String = term.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("cannot read group term {term:?}"));
    let (base, power) = match t.split_once('^') {
        Some((b, k)) => (b, k.parse::<usize>().map_err(|_| bad())?),
        None => (t.as_str(), 1),
    };
    let factor = match base {
        "0" => return Ok(Vec::new()),
        "Z" | "ℤ" => BigInt::zero(),
        _ => {
            let n = base.strip_prefix("Z/").or_else(|| base.strip_prefix("ℤ/")).ok_or_else(bad)?;
            let n: BigInt = n.parse().map_err(|_| bad())?;
            if n < BigInt::zero() {
                return Err(bad());
            }
            n
        }
    };
    // Z/1 is trivial, Z/0 is Z.
    if factor == BigInt::from(1) {
        return Ok(Vec::new());
    }
    Ok(vec![factor; power])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv(s: &str) -> Vec<u64> {
        parse_group(s).unwrap().invariants_u64().unwrap()
    }

    #[test]
    fn shorthand() {
        assert_eq!(inv("Z/2"), vec![2]);
        assert_eq!(inv("Z"), vec![0]);
        assert_eq!(inv("0"), Vec::<u64>::new());
        assert_eq!(inv("Z/2 + Z/4"), vec![2, 4]);
        assert_eq!(inv("Z/2 ⊕ Z^2"), vec![2, 0, 0]);
        assert_eq!(inv("Z/3^2"), vec![3, 3]);
        assert!(parse_group("Q").is_err());
        assert!(parse_group("Z/x").is_err());
    }

    #[test]
    fn json_form() {
        assert_eq!(inv(r#"{"generators": 1, "relations": [[4]]}"#), vec![4]);
    }
}
