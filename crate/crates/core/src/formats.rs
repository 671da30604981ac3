use std::fmt::Write as _;

use itertools::Itertools;
use serde::Deserialize;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;

/// Parses the plain facet-list format: one facet per line as 1-based
/// whitespace-separated vertices, `#` to end of line is a comment, blank
/// lines are skipped. An optional unique header `vertices: m` fixes the
/// vertex count; otherwise it is the largest vertex mentioned.
pub fn parse_facet_list(text: &str) -> Result<SimplicialComplex> {
    let mut header: Option<usize> = None;
    let mut facets: Vec<Vec<usize>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("vertices:") {
            if header.is_some() {
                return Err(Error::Parse {
                    line: line_no,
                    message: "duplicate vertices header".to_string(),
                });
            }
            let count = rest.trim().parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid vertex count '{}'", rest.trim()),
            })?;
            header = Some(count);
            continue;
        }
        let facet = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("invalid vertex '{tok}'"),
                })
            })
            .collect::<Result<Vec<usize>>>()?;
        facets.push(facet);
    }
    build_from_lists(header, facets)
}

/// Canonical facet-list serialization; `parse_facet_list` inverts it.
pub fn emit_facet_list(k: &SimplicialComplex) -> String {
    let mut out = format!("vertices: {}\n", k.m());
    for facet in k.facets() {
        let _ = writeln!(out, "{}", facet.iter().join(" "));
    }
    out
}

#[derive(Deserialize)]
struct JsonComplex {
    vertices: usize,
    facets: Vec<Vec<usize>>,
}

/// Parses the JSON input format `{"vertices": m, "facets": [[..], ..]}`;
/// agrees with the facet-list parser on shared inputs.
pub fn parse_json(text: &str) -> Result<SimplicialComplex> {
    let doc: JsonComplex = serde_json::from_str(text).map_err(|e| Error::Schema {
        message: e.to_string(),
    })?;
    build_from_lists(Some(doc.vertices), doc.facets)
}

/// Dispatches on the leading character: a JSON object or a facet list.
pub fn parse_auto(text: &str) -> Result<SimplicialComplex> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_facet_list(text)
    }
}

fn build_from_lists(header: Option<usize>, facets: Vec<Vec<usize>>) -> Result<SimplicialComplex> {
    let max_vertex = facets.iter().flatten().copied().max().unwrap_or(0);
    let m = header.unwrap_or(max_vertex);
    let sets = facets
        .iter()
        .map(|f| VertexSet::from_labels(f, m))
        .collect::<Result<Vec<VertexSet>>>()?;
    SimplicialComplex::build(m, sets)
}

/// Boundary of the m-gon: the smallest sphere family, one circle per m.
pub fn gen_polygon(m: usize) -> Result<SimplicialComplex> {
    if m < 4 {
        return Err(Error::TooFewVertices { m, min: 4 });
    }
    let facets = (1..=m)
        .map(|i| {
            let j = if i == m { 1 } else { i + 1 };
            VertexSet::from_labels(&[i, j], m).expect("cycle vertices in range")
        })
        .collect();
    SimplicialComplex::build(m, facets)
}

/// Boundary complex of the cyclic polytope C(m, d) for even d: an
/// (n = d/2 - 1)-neighbourly triangulation of the sphere S^(d-1). Facets are
/// the d-subsets passing Gale's evenness condition; checking it between
/// consecutive outside elements suffices because gap counts add up.
pub fn gen_cyclic_boundary(m: usize, d: usize) -> Result<SimplicialComplex> {
    if d < 2 || d % 2 != 0 {
        return Err(Error::BadParameters {
            message: format!("the cyclic boundary family needs an even dimension >= 2, got {d}"),
        });
    }
    if m < d + 1 {
        return Err(Error::TooFewVertices { m, min: d + 1 });
    }
    let facets: Vec<VertexSet> = (1..=m)
        .combinations(d)
        .filter(|s| gale_even(s, m))
        .map(|s| VertexSet::from_labels(&s, m).expect("combination in range"))
        .collect();
    SimplicialComplex::build(m, facets)
}

fn gale_even(s: &[usize], m: usize) -> bool {
    let mut inside = vec![false; m + 1];
    for &v in s {
        inside[v] = true;
    }
    let outside: Vec<usize> = (1..=m).filter(|&v| !inside[v]).collect();
    outside.windows(2).all(|pair| {
        s.iter()
            .filter(|&&x| pair[0] < x && x < pair[1])
            .count()
            % 2
            == 0
    })
}
