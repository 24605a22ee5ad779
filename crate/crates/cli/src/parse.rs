//! Command-line value parsers.

use anyhow::{anyhow, bail, Context, Result};

use fibre_core::poly::{Chart, ProjCoord, Rational};
use fibre_core::presets::Preset;

pub fn rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    s.parse::<Rational>()
        .map_err(|e| anyhow!("invalid rational {s:?}: {e}"))
}

/// `"a:b"`, a bare rational, or `inf`.
pub fn proj_coord(s: &str) -> Result<ProjCoord> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("inf") || s == "∞" {
        return Ok(ProjCoord::Infinity);
    }
    match s.split_once(':') {
        Some((a, b)) => {
            let a = rational(a)?;
            let b = rational(b)?;
            if b == Rational::from_integer(0.into()) {
                if a == b {
                    bail!("[0:0] is not a point of P1");
                }
                Ok(ProjCoord::Infinity)
            } else {
                Ok(ProjCoord::Finite(a / b))
            }
        }
        None => Ok(ProjCoord::Finite(rational(s)?)),
    }
}

pub fn chart(s: &str) -> Result<Chart> {
    Chart::ALL
        .iter()
        .copied()
        .find(|c| c.to_string().eq_ignore_ascii_case(s))
        .ok_or_else(|| anyhow!("unknown chart {s:?}; expected one of xt, zt, xs, zs"))
}

pub fn point(s: &str) -> Result<(Rational, Rational)> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| anyhow!("expected a point as a,b; got {s:?}"))?;
    Ok((rational(a)?, rational(b)?))
}

pub fn mults(s: &str) -> Result<Vec<u64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<u64>()
                .with_context(|| format!("invalid multiplicity {x:?}"))
        })
        .collect()
}

pub fn preset(name: &str, alpha: Option<&str>, h: u32, corrected: bool) -> Result<Preset> {
    Ok(match name {
        "type1" => Preset::Type1 {
            alpha: match alpha {
                Some(a) => rational(a)?,
                None => Rational::from_integer(1.into()),
            },
        },
        "type2" => Preset::Type2,
        "type3" => Preset::Type3 { corrected },
        "type4" => Preset::Type4 { h },
        other => match other.strip_prefix("even:") {
            Some(n) => Preset::Even {
                n: n.parse().with_context(|| format!("invalid even-family size {n:?}"))?,
            },
            None => bail!("unknown preset {other:?}; expected type1, type2, type3, type4 or even:n"),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use fibre_core::poly::{rat, ratio};

    #[test]
    fn coords() {
        assert_eq!(proj_coord("0:1").unwrap(), ProjCoord::Finite(rat(0)));
        assert_eq!(proj_coord("1:0").unwrap(), ProjCoord::Infinity);
        assert_eq!(proj_coord("3:6").unwrap(), ProjCoord::Finite(ratio(1, 2)));
        assert_eq!(proj_coord("-2/3").unwrap(), ProjCoord::Finite(ratio(-2, 3)));
        assert!(proj_coord("0:0").is_err());
    }

    #[test]
    fn presets() {
        assert_eq!(preset("even:4", None, 0, false).unwrap(), Preset::Even { n: 4 });
        assert!(preset("type9", None, 0, false).is_err());
        assert_eq!(mults("2, 3,7").unwrap(), vec![2, 3, 7]);
    }
}
