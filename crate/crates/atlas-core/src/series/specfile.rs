//! Text spec files: a `[series]` section of `key = value` lines naming the
//! family and its parameters. Custom series point at two-column coefficient
//! tables (real imag per row) and a one-column exponent table.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;

use crate::error::EvalError;
use crate::series::SeriesSpec;

fn parse_kv(text: &str) -> BTreeMap<String, String> {
    let mut map = BTreeMap::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('[') {
            continue;
        }
        if let Some((k, v)) = line.split_once('=') {
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
    }
    map
}

fn need<'m>(map: &'m BTreeMap<String, String>, key: &str) -> Result<&'m str, EvalError> {
    map.get(key)
        .map(String::as_str)
        .ok_or_else(|| EvalError::InvalidSpec(format!("spec file missing key `{key}`")))
}

fn parse_complex(tok: &str) -> Result<Complex64, EvalError> {
    let tok = tok.trim();
    if let Some((re, im)) = tok.split_once(',') {
        let re: f64 = re
            .trim()
            .parse()
            .map_err(|_| EvalError::InvalidSpec(format!("bad number `{re}`")))?;
        let im: f64 = im
            .trim()
            .parse()
            .map_err(|_| EvalError::InvalidSpec(format!("bad number `{im}`")))?;
        Ok(Complex64::new(re, im))
    } else {
        let re: f64 = tok
            .parse()
            .map_err(|_| EvalError::InvalidSpec(format!("bad number `{tok}`")))?;
        Ok(Complex64::new(re, 0.0))
    }
}

/// Parse a spec from file contents. `dir` resolves relative table paths.
pub fn parse_spec_text(text: &str, dir: &Path) -> Result<SeriesSpec, EvalError> {
    let map = parse_kv(text);
    let family = need(&map, "family")?;
    match family {
        "zeta" => Ok(SeriesSpec::zeta()),
        "dirichlet-l" => {
            let q: u32 = need(&map, "q")?
                .parse()
                .map_err(|_| EvalError::InvalidSpec("bad modulus".into()))?;
            let index: u32 = need(&map, "index")?
                .parse()
                .map_err(|_| EvalError::InvalidSpec("bad character index".into()))?;
            SeriesSpec::dirichlet_l(q, index)
        }
        "davenport-heilbronn" => Ok(SeriesSpec::davenport_heilbronn()),
        "hurwitz-combination" => {
            let q: u32 = need(&map, "q")?
                .parse()
                .map_err(|_| EvalError::InvalidSpec("bad denominator".into()))?;
            let weights = need(&map, "weights")?
                .split(';')
                .map(parse_complex)
                .collect::<Result<Vec<_>, _>>()?;
            SeriesSpec::hurwitz_combination(q, weights)
        }
        "linear-combination" => {
            let children: Vec<&str> = need(&map, "children")?.split(';').collect();
            let weights = need(&map, "weights")?
                .split(';')
                .map(parse_complex)
                .collect::<Result<Vec<_>, _>>()?;
            if weights.len() != children.len() {
                return Err(EvalError::InvalidSpec(
                    "children and weights must have equal length".into(),
                ));
            }
            let parts = children
                .iter()
                .zip(weights)
                .map(|(c, w)| Ok((w, parse_descriptor(c.trim())?)))
                .collect::<Result<Vec<_>, EvalError>>()?;
            SeriesSpec::linear_combination(parts)
        }
        "custom" => {
            let cf = need(&map, "coefficients_file")?;
            let ef = need(&map, "exponents_file")?;
            let ctext = std::fs::read_to_string(dir.join(cf))
                .map_err(|e| EvalError::InvalidSpec(format!("cannot read {cf}: {e}")))?;
            let etext = std::fs::read_to_string(dir.join(ef))
                .map_err(|e| EvalError::InvalidSpec(format!("cannot read {ef}: {e}")))?;
            let coeffs = ctext
                .lines()
                .filter(|l| !l.trim().is_empty())
                .map(|l| {
                    let mut it = l.split_whitespace();
                    let re: f64 = it
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| EvalError::InvalidSpec(format!("bad row `{l}`")))?;
                    let im: f64 = it.next().and_then(|t| t.parse().ok()).unwrap_or(0.0);
                    Ok(Complex64::new(re, im))
                })
                .collect::<Result<Vec<_>, EvalError>>()?;
            let exponents = etext
                .lines()
                .filter(|l| !l.trim().is_empty())
                .map(|l| {
                    l.trim()
                        .parse::<f64>()
                        .map_err(|_| EvalError::InvalidSpec(format!("bad exponent `{l}`")))
                })
                .collect::<Result<Vec<_>, EvalError>>()?;
            SeriesSpec::custom(coeffs, exponents)
        }
        other => Err(EvalError::InvalidSpec(format!("unknown family `{other}`"))),
    }
}

pub fn parse_spec_file(path: &Path) -> Result<SeriesSpec, EvalError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| EvalError::InvalidSpec(format!("cannot read {}: {e}", path.display())))?;
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    parse_spec_text(&text, dir)
}

/// Compact spec descriptors used on the command line and inside combination
/// spec files: `zeta`, `L:q:j`, `dh`, `combo:q:i:j:w`, `file:path`.
pub fn parse_descriptor(desc: &str) -> Result<SeriesSpec, EvalError> {
    if desc == "zeta" {
        return Ok(SeriesSpec::zeta());
    }
    if desc == "dh" {
        return Ok(SeriesSpec::davenport_heilbronn());
    }
    if let Some(rest) = desc.strip_prefix("file:") {
        return parse_spec_file(Path::new(rest));
    }
    if let Some(rest) = desc.strip_prefix("L:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 2 {
            return Err(EvalError::InvalidSpec(format!(
                "expected L:<modulus>:<index>, got `{desc}`"
            )));
        }
        let q = parts[0]
            .parse()
            .map_err(|_| EvalError::InvalidSpec(format!("bad modulus in `{desc}`")))?;
        let j = parts[1]
            .parse()
            .map_err(|_| EvalError::InvalidSpec(format!("bad index in `{desc}`")))?;
        return SeriesSpec::dirichlet_l(q, j);
    }
    if let Some(rest) = desc.strip_prefix("S:") {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 2 {
            return Err(EvalError::InvalidSpec(format!(
                "expected S:<modulus>:<index>, got `{desc}`"
            )));
        }
        let q = parts[0]
            .parse()
            .map_err(|_| EvalError::InvalidSpec(format!("bad modulus in `{desc}`")))?;
        let j = parts[1]
            .parse()
            .map_err(|_| EvalError::InvalidSpec(format!("bad index in `{desc}`")))?;
        return SeriesSpec::self_dual_pair(q, j);
    }
    if let Some(rest) = desc.strip_prefix("combo:") {
        let parts: Vec<&str> = rest.split(':').collect();
        // `combo:7` is the calibrated double-zero combination.
        if parts.len() == 1 && parts[0] == "7" {
            return Ok(SeriesSpec::double_zero_combination_mod7());
        }
        if parts.len() == 4 {
            let q = parts[0]
                .parse()
                .map_err(|_| EvalError::InvalidSpec("bad modulus".into()))?;
            let i = parts[1]
                .parse()
                .map_err(|_| EvalError::InvalidSpec("bad first index".into()))?;
            let j = parts[2]
                .parse()
                .map_err(|_| EvalError::InvalidSpec("bad second index".into()))?;
            let w = parts[3]
                .parse()
                .map_err(|_| EvalError::InvalidSpec("bad weight".into()))?;
            return SeriesSpec::l_pair_combination(q, i, j, w);
        }
        return Err(EvalError::InvalidSpec(format!(
            "expected combo:<q>:<i>:<j>:<w>, got `{desc}`"
        )));
    }
    Err(EvalError::InvalidSpec(format!("unknown spec `{desc}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptor_round_trips() {
        assert_eq!(parse_descriptor("zeta").unwrap().id(), "zeta");
        assert_eq!(parse_descriptor("L:5:2").unwrap().id(), "L:5:2");
        assert_eq!(parse_descriptor("dh").unwrap().id(), "dh");
        assert!(parse_descriptor("L:5:9").is_err());
        assert!(parse_descriptor("nonsense").is_err());
    }

    #[test]
    fn spec_text_for_l_function() {
        let text = "[series]\nfamily = dirichlet-l\nq = 5\nindex = 2\n";
        let spec = parse_spec_text(text, Path::new(".")).unwrap();
        assert_eq!(spec.id(), "L:5:2");
    }
}
