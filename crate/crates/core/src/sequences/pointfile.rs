//! Plain-text point files.
//!
//! ```text
//! # generator: vdc
//! # params: base=2
//! # n: 3
//! 0.5
//! 0.25
//! 0.75
//! ```
//!
//! Values use the shortest decimal form that parses back to the same float
//! (at most 17 significant digits for `f64`). Header lines start with `#`;
//! `seed` appears only for seeded generators.

use std::io::{BufRead, Write};

use super::{PointMeta, PointSet};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub fn write_points<T: Scalar, W: Write>(ps: &PointSet<T>, mut out: W) -> Result<()> {
    let meta = ps.meta();
    writeln!(out, "# generator: {}", meta.generator)?;
    if !meta.params.is_empty() {
        writeln!(out, "# params: {}", meta.params_text())?;
    }
    if let Some(seed) = meta.seed {
        writeln!(out, "# seed: {seed}")?;
    }
    writeln!(out, "# n: {}", ps.len())?;
    for v in ps.points() {
        writeln!(out, "{v:?}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_points<T: Scalar, R: BufRead>(input: R) -> Result<PointSet<T>> {
    let mut meta = PointMeta::new("file");
    let mut declared_n = None;
    let mut points = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        if let Some(comment) = text.strip_prefix('#') {
            let Some((key, value)) = comment.split_once(':') else {
                continue;
            };
            let value = value.trim();
            match key.trim() {
                "generator" => meta.generator = value.to_string(),
                "params" => {
                    meta.params = value
                        .split(',')
                        .filter(|kv| !kv.is_empty())
                        .map(|kv| match kv.split_once('=') {
                            Some((k, v)) => (k.to_string(), v.to_string()),
                            None => (kv.to_string(), String::new()),
                        })
                        .collect()
                }
                "seed" => {
                    meta.seed = Some(value.parse().map_err(|_| Error::Parse {
                        line: lineno,
                        msg: format!("bad seed {value:?}"),
                    })?)
                }
                "n" => {
                    declared_n = Some(value.parse::<usize>().map_err(|_| Error::Parse {
                        line: lineno,
                        msg: format!("bad count {value:?}"),
                    })?)
                }
                _ => {}
            }
            continue;
        }
        let v: T = text.parse().map_err(|_| Error::Parse {
            line: lineno,
            msg: format!("not a number: {text:?}"),
        })?;
        points.push(v);
    }
    if let Some(n) = declared_n {
        if n != points.len() {
            return Err(Error::Parse {
                line: 0,
                msg: format!(
                    "header declares n = {n} but file has {} values",
                    points.len()
                ),
            });
        }
    }
    PointSet::new(points, meta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::{gen_kronecker, gen_uniform};

    #[test]
    fn round_trip_is_bit_exact() {
        let ps = gen_uniform::<f64>(200, 11).unwrap();
        let mut buf = Vec::new();
        write_points(&ps, &mut buf).unwrap();
        let back: PointSet<f64> = read_points(&buf[..]).unwrap();
        assert_eq!(back.points(), ps.points());
        assert_eq!(back.meta(), ps.meta());
    }

    #[test]
    fn kronecker_half_file_lines() {
        let ps = gen_kronecker(0.5_f64, 2).unwrap();
        let mut buf = Vec::new();
        write_points(&ps, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let values: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(values, vec!["0.5", "0.0"]);
    }

    #[test]
    fn rejects_garbage_and_count_mismatch() {
        let bad = "# n: 1\n0.5\nabc\n";
        assert!(matches!(
            read_points::<f64, _>(bad.as_bytes()),
            Err(Error::Parse { line: 3, .. })
        ));
        let short = "# n: 3\n0.5\n";
        assert!(read_points::<f64, _>(short.as_bytes()).is_err());
        let out_of_range = "1.5\n";
        assert!(matches!(
            read_points::<f64, _>(out_of_range.as_bytes()),
            Err(Error::InvalidArgument(_))
        ));
    }
}
