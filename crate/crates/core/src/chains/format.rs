//! Family file format.
//!
//! ```text
//! family: periodic_template
//! param: step 2
//! vertices: c y
//! edge: c y
//! repeat: shared-vertex c
//! tail: geometric 1/2 1
//! ```
//!
//! Kinds: `infinite_star`, `infinite_k_matching` (needs `param: k`),
//! `ray_path`, `disjoint_copies`, `periodic_template` and `finite`. The last
//! three take a template hypergraph given with `vertices:` and `edge:` lines.
//! Params: `step` (units per prefix index), `k`, and `rank` (declared rank
//! bound).

use num_rational::BigRational;
use num_traits::Zero;

use super::{FamilySpec, GeometricTail, Repeat};
use crate::error::{Error, Result};
use crate::hypercore::format::strip_comment;
use crate::hypercore::{HypergraphBuilder, ParseOptions};
use crate::rational::parse_rational;

pub fn parse_family(text: &str) -> Result<FamilySpec> {
    parse_family_with(text, &ParseOptions::default())
}

pub fn parse_family_with(text: &str, opts: &ParseOptions) -> Result<FamilySpec> {
    let mut kind: Option<(String, usize)> = None;
    let mut step = None;
    let mut k = None;
    let mut rank = None;
    let mut repeat: Option<(String, usize)> = None;
    let mut tail: Option<(GeometricTail, usize)> = None;
    let mut template = HypergraphBuilder::new();

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line
            .split_once(':')
            .ok_or_else(|| Error::format(lineno, format!("unrecognized line `{line}`")))?;
        let rest = rest.trim();
        match key.trim() {
            "family" => {
                if kind.is_some() {
                    return Err(Error::format(lineno, "second `family:` line"));
                }
                kind = Some((rest.to_owned(), lineno));
            }
            "param" => {
                let mut parts = rest.split_whitespace();
                let (Some(name), Some(value), None) = (parts.next(), parts.next(), parts.next())
                else {
                    return Err(Error::format(lineno, "expected `param: <name> <value>`"));
                };
                let value: usize = value
                    .parse()
                    .map_err(|_| Error::format(lineno, format!("bad integer `{value}`")))?;
                match name {
                    "step" => step = Some(value),
                    "k" => k = Some(value),
                    "rank" => rank = Some(value),
                    _ => return Err(Error::format(lineno, format!("unknown param `{name}`"))),
                }
            }
            "vertices" => template.vertices_line(rest, lineno, opts)?,
            "edge" => template.edge_line(rest, lineno, opts)?,
            "repeat" => repeat = Some((rest.to_owned(), lineno)),
            "tail" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let ["geometric", r, c] = parts[..] else {
                    return Err(Error::format(
                        lineno,
                        "expected `tail: geometric <ratio a/b> <coefficient a/b>`",
                    ));
                };
                let ratio = parse_rational(r).map_err(|e| Error::format(lineno, e.to_string()))?;
                let coefficient =
                    parse_rational(c).map_err(|e| Error::format(lineno, e.to_string()))?;
                if ratio < BigRational::zero() || coefficient < BigRational::zero() {
                    return Err(Error::format(lineno, "tail terms must be non-negative"));
                }
                tail = Some((GeometricTail { ratio, coefficient }, lineno));
            }
            other => {
                return Err(Error::format(lineno, format!("unknown directive `{other}`")));
            }
        }
    }

    let (kind, kind_line) = kind.ok_or_else(|| Error::format(0, "missing `family:` line"))?;
    let has_template = !template.is_empty();
    let needs_template = matches!(
        kind.as_str(),
        "disjoint_copies" | "periodic_template" | "finite"
    );
    if has_template && !needs_template {
        return Err(Error::format(
            kind_line,
            format!("family `{kind}` does not take a template"),
        ));
    }
    if !has_template && needs_template {
        return Err(Error::format(kind_line, format!("family `{kind}` needs a template")));
    }
    if k.is_some() && kind != "infinite_k_matching" {
        return Err(Error::format(kind_line, "param `k` only applies to infinite_k_matching"));
    }
    if let Some((_, line)) = &repeat {
        if kind != "periodic_template" {
            return Err(Error::format(*line, "`repeat:` only applies to periodic_template"));
        }
    }
    if let Some((_, line)) = &tail {
        if kind != "periodic_template" {
            return Err(Error::format(
                *line,
                "`tail:` only applies to periodic_template; built-in families carry their own",
            ));
        }
    }
    let at = |e: Error| match e {
        Error::Domain(m) => Error::format(kind_line, m),
        e => e,
    };

    let mut family = match kind.as_str() {
        "infinite_star" => FamilySpec::infinite_star(),
        "infinite_k_matching" => {
            let k = k.ok_or_else(|| Error::format(kind_line, "infinite_k_matching needs `param: k`"))?;
            FamilySpec::infinite_matching(k).map_err(at)?
        }
        "ray_path" => FamilySpec::ray_path(),
        "disjoint_copies" => FamilySpec::disjoint_copies(template.finish()?).map_err(at)?,
        "finite" => FamilySpec::finite(template.finish()?),
        "periodic_template" => {
            let t = template.finish()?;
            let rep = match &repeat {
                None => Repeat::Disjoint,
                Some((r, line)) => {
                    let parts: Vec<&str> = r.split_whitespace().collect();
                    match parts[..] {
                        ["disjoint"] => Repeat::Disjoint,
                        ["shared-vertex", label] => Repeat::SharedVertex(t.vertex(label).ok_or_else(
                            || Error::format(*line, format!("shared vertex `{label}` not in template")),
                        )?),
                        _ => {
                            return Err(Error::format(
                                *line,
                                "expected `repeat: disjoint` or `repeat: shared-vertex <label>`",
                            ))
                        }
                    }
                }
            };
            FamilySpec::periodic(t, rep).map_err(at)?
        }
        other => {
            return Err(Error::format(kind_line, format!("unknown family kind `{other}`")));
        }
    };
    if let Some(s) = step {
        family = family.with_step(s).map_err(at)?;
    }
    if let Some(r) = rank {
        family = family.with_rank_bound(r).map_err(at)?;
    }
    if let Some((t, _)) = tail {
        family = family.with_tail(t);
    }
    Ok(family)
}
