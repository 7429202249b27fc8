//! File formats: JSON polytope files and cdd-style `.ine`/`.ext` text.
//!
//! All scalars are written as canonical rational strings.
//!
//! ```text
//! {"dim": 2, "rows": [["-31/4","1/2"], ...], "rhs": ["1","1/16", ...], "labels": [[1,0], ...]}
//! ```
//!
//! The cdd text form stores each inequality `a x <= b` as the row
//! `b -a_1 ... -a_d`. Row labels, when present, travel in a `* labels:`
//! comment line, which cdd itself ignores.

use serde::{Deserialize, Serialize};

use super::{HPolytope, RowLabel, VPolytope};
use crate::error::{Error, Result};
use crate::linalg::{QMatrix, QVector};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub dim: usize,
    pub rows: Vec<Vec<String>>,
    pub rhs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<[usize; 2]>>,
    /// Construction parameters and adaptation log, when the system was
    /// produced by the builder.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerticesJson {
    pub dim: usize,
    pub vertices: Vec<Vec<String>>,
    pub incidence: Vec<Vec<usize>>,
}

impl PolytopeJson {
    pub fn from_polytope(p: &HPolytope) -> Self {
        Self {
            dim: p.dim(),
            rows: p.matrix().row_iter().map(rational::format_all).collect(),
            rhs: rational::format_all(p.rhs()),
            labels: p
                .labels()
                .map(|ls| ls.iter().map(|l| [l.block, l.index]).collect()),
            params: None,
        }
    }

    pub fn to_polytope(&self) -> Result<HPolytope> {
        let rows = self
            .rows
            .iter()
            .map(|r| rational::parse_all(r))
            .collect::<Result<Vec<_>>>()?;
        let a = QMatrix::from_rows(self.dim, rows)?;
        let p = HPolytope::new(a, rational::parse_all(&self.rhs)?)?;
        match &self.labels {
            Some(ls) => p.with_labels(
                ls.iter()
                    .map(|&[block, index]| RowLabel { block, index })
                    .collect(),
            ),
            None => Ok(p),
        }
    }
}

impl VerticesJson {
    pub fn from_vertices(v: &VPolytope) -> Self {
        Self {
            dim: v.dim,
            vertices: v.vertices.iter().map(|x| rational::format_all(x)).collect(),
            incidence: v.incidence.clone(),
        }
    }
}

pub fn write_ine(p: &HPolytope) -> String {
    let mut out = String::new();
    if let Some(ls) = p.labels() {
        let tags: Vec<String> = ls
            .iter()
            .map(|l| format!("{}:{}", l.block, l.index))
            .collect();
        out.push_str(&format!("* labels: {}\n", tags.join(" ")));
    }
    out.push_str("H-representation\nbegin\n");
    out.push_str(&format!(" {} {} rational\n", p.num_rows(), p.dim() + 1));
    for (row, b) in p.matrix().row_iter().zip(p.rhs()) {
        let mut tokens = vec![rational::format(b)];
        tokens.extend(row.iter().map(|a| rational::format(&-a)));
        out.push(' ');
        out.push_str(&tokens.join(" "));
        out.push('\n');
    }
    out.push_str("end\n");
    out
}

pub fn write_ext(v: &VPolytope) -> String {
    let mut out = String::from("V-representation\nbegin\n");
    out.push_str(&format!(" {} {} rational\n", v.len(), v.dim + 1));
    for x in &v.vertices {
        let mut tokens = vec!["1".to_string()];
        tokens.extend(x.iter().map(rational::format));
        out.push(' ');
        out.push_str(&tokens.join(" "));
        out.push('\n');
    }
    out.push_str("end\n");
    out
}

struct CddBlock {
    kind: String,
    rows: Vec<Vec<Rational>>,
    cols: usize,
    labels: Option<Vec<RowLabel>>,
}

fn parse_cdd(text: &str) -> Result<CddBlock> {
    let err = |m: &str| Error::Parse(format!("cdd: {m}"));
    let mut labels = None;
    let mut kind = String::new();
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    loop {
        let line = lines.next().ok_or_else(|| err("missing 'begin'"))?;
        if let Some(rest) = line.strip_prefix("* labels:") {
            let parsed = rest
                .split_whitespace()
                .map(|tok| {
                    let (b, i) = tok.split_once(':').ok_or_else(|| err("bad label"))?;
                    Ok(RowLabel {
                        block: b.parse().map_err(|_| err("bad label"))?,
                        index: i.parse().map_err(|_| err("bad label"))?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            labels = Some(parsed);
        } else if line.starts_with('*') {
            continue;
        } else if line.ends_with("-representation") {
            kind = line.to_string();
        } else if line == "begin" {
            break;
        }
    }
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| err("missing size line"))?
        .split_whitespace()
        .collect();
    let [m, cols, num] = header[..] else {
        return Err(err("size line must be 'm n rational'"));
    };
    if num != "rational" && num != "integer" {
        return Err(err("only rational or integer data is supported"));
    }
    let m: usize = m.parse().map_err(|_| err("bad row count"))?;
    let cols: usize = cols.parse().map_err(|_| err("bad column count"))?;
    let mut rows = Vec::with_capacity(m);
    for _ in 0..m {
        let line = lines.next().ok_or_else(|| err("too few rows"))?;
        let row = line
            .split_whitespace()
            .map(rational::parse)
            .collect::<Result<Vec<_>>>()?;
        if row.len() != cols {
            return Err(err("row length differs from header"));
        }
        rows.push(row);
    }
    if lines.next() != Some("end") {
        return Err(err("missing 'end'"));
    }
    Ok(CddBlock {
        kind,
        rows,
        cols,
        labels,
    })
}

pub fn parse_ine(text: &str) -> Result<HPolytope> {
    let block = parse_cdd(text)?;
    if !block.kind.is_empty() && block.kind != "H-representation" {
        return Err(Error::Parse(format!(
            "expected H-representation, got {}",
            block.kind
        )));
    }
    if block.cols == 0 {
        return Err(Error::Parse("cdd: zero columns".into()));
    }
    let d = block.cols - 1;
    let mut a = Vec::with_capacity(block.rows.len());
    let mut b = Vec::with_capacity(block.rows.len());
    for row in block.rows {
        b.push(row[0].clone());
        a.push(row[1..].iter().map(|x| -x).collect::<QVector>());
    }
    let p = HPolytope::new(QMatrix::from_rows(d, a)?, b)?;
    match block.labels {
        Some(ls) => p.with_labels(ls),
        None => Ok(p),
    }
}

/// Points of a V-representation; rays (leading 0) are rejected.
pub fn parse_ext(text: &str) -> Result<Vec<QVector>> {
    let block = parse_cdd(text)?;
    if block.kind != "V-representation" {
        return Err(Error::Parse("expected V-representation".into()));
    }
    block
        .rows
        .into_iter()
        .map(|row| {
            let lead = &row[0];
            if num_traits::Zero::is_zero(lead) {
                return Err(Error::Parse("rays are not supported".into()));
            }
            Ok(row[1..].iter().map(|x| x / lead).collect())
        })
        .collect()
}
