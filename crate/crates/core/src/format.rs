//! Plain-text complex files.
//!
//! ```text
//! # a comment
//! a b c @top        one simplex per line, optional stratum tag
//! a b               untagged simplices belong to stratum `main`
//! !mark a           carve vertex `a` out as a point stratum
//! ```
//!
//! The complex is the face closure of the listed simplices. A face that is not
//! listed itself takes the stratum of the lowest-dimensional listed simplex
//! containing it, the earliest such line winning ties.

use std::fmt::Write as _;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::strata::{for_each_face, mark_point, Stratification};

pub const DEFAULT_STRATUM: &str = "main";

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

pub fn parse_complex_file(text: &str) -> Result<(SimplicialComplex, Stratification)> {
    let mut listed: Vec<(usize, Vec<String>, String)> = Vec::new();
    let mut marks: Vec<(usize, String)> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('!') {
            let mut words = rest.split_whitespace();
            match (words.next(), words.next(), words.next()) {
                (Some("mark"), Some(v), None) => marks.push((line_no, v.to_string())),
                (Some("mark"), _, _) => return Err(parse_error(line_no, "`!mark` takes exactly one vertex")),
                (Some(other), _, _) => return Err(parse_error(line_no, format!("unknown directive `!{other}`"))),
                (None, _, _) => return Err(parse_error(line_no, "empty directive")),
            }
            continue;
        }
        let mut vertices = Vec::new();
        let mut tag: Option<String> = None;
        for word in line.split_whitespace() {
            if let Some(t) = word.strip_prefix('@') {
                if tag.is_some() {
                    return Err(parse_error(line_no, "more than one stratum tag"));
                }
                if t.is_empty() {
                    return Err(parse_error(line_no, "empty stratum tag"));
                }
                tag = Some(t.to_string());
            } else if tag.is_some() {
                return Err(parse_error(line_no, "the stratum tag must come last"));
            } else if word.contains(['#', '!', '@']) {
                return Err(parse_error(line_no, format!("invalid vertex name `{word}`")));
            } else {
                vertices.push(word.to_string());
            }
        }
        if vertices.is_empty() {
            return Err(parse_error(line_no, "a stratum tag without a simplex"));
        }
        let mut sorted = vertices.clone();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(parse_error(line_no, format!("simplex {:?} repeats vertex `{}`", vertices, w[0])));
        }
        listed.push((line_no, vertices, tag.unwrap_or_else(|| DEFAULT_STRATUM.to_string())));
    }
    if listed.is_empty() {
        return Err(parse_error(0, "no simplices"));
    }
    let simplices: Vec<Vec<String>> = listed.iter().map(|(_, v, _)| v.clone()).collect();
    let k = SimplicialComplex::build(&simplices)?;

    // (dimension of the listed simplex, line) of the best claim on each simplex of K
    let mut claim: Vec<Vec<Option<(usize, usize, usize)>>> = k.counts().iter().map(|&c| vec![None; c]).collect();
    for (idx, (line_no, names, _)) in listed.iter().enumerate() {
        let s = k.simplex_by_names(names)?;
        let dim = s.len() - 1;
        for_each_face(&s, |f| {
            let fi = k.index_of(f).expect("face of a listed simplex");
            let slot = &mut claim[f.len() - 1][fi];
            let key = (dim, *line_no, idx);
            if slot.is_none_or(|c| (c.0, c.1) > (key.0, key.1)) {
                *slot = Some(key);
            }
        });
    }
    let names: Vec<Vec<String>> = claim
        .iter()
        .map(|row| row.iter().map(|c| listed[c.expect("every simplex is a face of a listed one").2].2.clone()).collect())
        .collect();
    let mut strat = Stratification::from_names(&k, &names)?;
    for (line_no, v) in marks {
        let id = k.vertex(&v).map_err(|_| parse_error(line_no, format!("`!mark` names unknown vertex `{v}`")))?;
        strat = mark_point(&k, &strat, id).map_err(|e| parse_error(line_no, e.to_string()))?;
    }
    Ok((k, strat))
}

/// Writes every simplex with its stratum, so the file reparses to the same stratified complex.
pub fn export_complex_file(k: &SimplicialComplex, strat: &Stratification, title: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {title}");
    let _ = writeln!(out, "# {} vertices, dimension {}, {} strata", k.vertex_count(), k.dim(), strat.strata().len());
    let names = strat.stratum_names();
    for d in (0..=k.dim()).rev() {
        for (i, s) in k.simplices(d).iter().enumerate() {
            let _ = writeln!(out, "{} @{}", k.simplex_names(s).join(" "), names[d][i]);
        }
    }
    out
}

/// Per-dimension multiset of (sorted vertex names, stratum name), for comparing stratified complexes.
pub fn canonical_form(k: &SimplicialComplex, strat: &Stratification) -> Vec<Vec<(Vec<String>, String)>> {
    let names = strat.stratum_names();
    (0..=k.dim())
        .map(|d| {
            let mut row: Vec<(Vec<String>, String)> = k
                .simplices(d)
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let mut v = k.simplex_names(s);
                    v.sort();
                    (v, names[d][i].clone())
                })
                .collect();
            row.sort();
            row
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    #[test]
    fn one_triangle() {
        let (k, s) = parse_complex_file("a b c\n").unwrap();
        assert_eq!(k.counts(), vec![3, 3, 1]);
        assert_eq!(s.strata().len(), 1);
        assert_eq!(s.strata()[0].name, DEFAULT_STRATUM);
    }

    #[test]
    fn tagged_triangles() {
        let (k, s) = parse_complex_file("# two\na b c @s1\na b d @s1\n").unwrap();
        assert_eq!(k.count(2), 2);
        assert_eq!(s.strata().len(), 1);
        assert_eq!(s.strata()[0].name, "s1");
        assert_eq!(s.strata()[0].dim, 2);
    }

    #[test]
    fn listed_faces_keep_their_own_tag() {
        let (k, s) = parse_complex_file("a b c @top\na b @edge\n").unwrap();
        let e = k.index_of(&k.simplex_by_names(&["a", "b"]).unwrap()).unwrap();
        assert_eq!(s.strata()[s.stratum_of(1, e)].name, "edge");
        let v = k.index_of(&[k.vertex("a").unwrap()]).unwrap();
        assert_eq!(s.strata()[s.stratum_of(0, v)].name, "edge");
        let c = k.index_of(&[k.vertex("c").unwrap()]).unwrap();
        assert_eq!(s.strata()[s.stratum_of(0, c)].name, "top");
    }

    #[test]
    fn mark_directive() {
        let (_, s) = parse_complex_file("a b c\n!mark a\n").unwrap();
        assert_eq!(s.strata().len(), 2);
        assert!(s.stratum_index("pt(a)").is_some());
    }

    #[test]
    fn errors_carry_line_numbers() {
        for (text, line) in [
            ("a b c\na a b\n", 2),
            ("a b @x @y\n", 1),
            ("\n\n!frob a\n", 3),
            ("a b\n!mark z\n", 2),
            ("a @x b\n", 1),
            ("@x\n", 1),
        ] {
            match parse_complex_file(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn pinched_rp2_round_trip() {
        let m = models::model("pinched_rp2").unwrap();
        let text = export_complex_file(&m.complex, &m.strat, "pinched_rp2");
        let (k, s) = parse_complex_file(&text).unwrap();
        assert_eq!(canonical_form(&k, &s), canonical_form(&m.complex, &m.strat));
        assert_eq!(k.vertex_count(), m.complex.vertex_count());
    }
}
