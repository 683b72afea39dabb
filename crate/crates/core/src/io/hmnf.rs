//! HMNF: line-oriented text serialization of an [`Hmn`].
//!
//! ```text
//! hmnf 1
//! directed false
//! [layers] 2
//! 0	air
//! 1	rail
//! [node_types] 1
//! 0	⊥
//! [edge_types] 1
//! 0	⊥
//! [nodes] 2
//! 0	0	0,1
//! 1	0	1
//! [edges] 1
//! 0	1	1	1	0	2.5
//! ```
//!
//! Section headers carry their record count. Records are tab-separated and
//! listed in ascending id order; edges are `src, src_layer, dst, dst_layer,
//! edge_type, weight` in canonical order. Names escape `\t`, `\n`, `\r` and
//! `\\`. Blank lines and lines starting with `#` are ignored.

#![allow(clippy::tabs_in_doc_comments)]

use std::io::Write;

use thiserror::Error;

use crate::graph::{
    sorted_edges, EdgeTypeId, GraphError, Hmn, LayerId, LayeredNode, NodeId, NodeTypeId,
};

pub const HMNF_VERSION: u32 = 1;

const SECTIONS: [&str; 5] = ["layers", "node_types", "edge_types", "nodes", "edges"];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HmnfError {
    #[error("input is not valid UTF-8 (byte {offset})")]
    Utf8 { offset: usize },
    #[error("line {line}: expected version tag `hmnf {HMNF_VERSION}`, found {found:?}")]
    Version { line: usize, found: String },
    #[error("line {line}: expected `directed true` or `directed false`, found {found:?}")]
    Directed { line: usize, found: String },
    #[error("line {line}: expected section [{expected}], found {found:?}")]
    SectionOrder {
        line: usize,
        expected: &'static str,
        found: String,
    },
    #[error("line {line}: malformed [{section}] record: {message}")]
    Malformed {
        line: usize,
        section: &'static str,
        message: String,
    },
    #[error("line {line}: {what} {id} is not declared")]
    Dangling {
        line: usize,
        what: &'static str,
        id: u32,
    },
    #[error("section [{section}] is incomplete at line {line}: {expected} records declared, {found} present")]
    Truncated {
        line: usize,
        section: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: unexpected content after the last section: {found:?}")]
    Trailing { line: usize, found: String },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
}

impl HmnfError {
    /// 1-based line the error refers to (0 for encoding errors).
    pub fn line(&self) -> usize {
        match self {
            HmnfError::Utf8 { .. } => 0,
            HmnfError::Version { line, .. }
            | HmnfError::Directed { line, .. }
            | HmnfError::SectionOrder { line, .. }
            | HmnfError::Malformed { line, .. }
            | HmnfError::Dangling { line, .. }
            | HmnfError::Truncated { line, .. }
            | HmnfError::Trailing { line, .. }
            | HmnfError::Graph { line, .. } => *line,
        }
    }
}

fn escape(name: &str) -> String {
    let mut out = String::with_capacity(name.len());
    for c in name.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

fn unescape(field: &str) -> Result<String, String> {
    let mut out = String::with_capacity(field.len());
    let mut chars = field.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some(other) => return Err(format!("unknown escape \\{other}")),
            None => return Err("dangling backslash".into()),
        }
    }
    Ok(out)
}

/// Canonical HMNF text of `g`.
pub fn to_hmnf_string(g: &Hmn) -> String {
    let mut out = Vec::new();
    write_hmnf(g, &mut out).expect("writing to a Vec cannot fail");
    String::from_utf8(out).expect("HMNF output is UTF-8")
}

pub fn write_hmnf<W: Write + ?Sized>(g: &Hmn, sink: &mut W) -> std::io::Result<()> {
    writeln!(sink, "hmnf {HMNF_VERSION}")?;
    writeln!(sink, "directed {}", g.is_directed())?;
    writeln!(sink, "[layers] {}", g.layer_count())?;
    for l in g.layer_ids() {
        writeln!(sink, "{}\t{}", l.0, escape(g.layer_name(l).unwrap_or_default()))?;
    }
    writeln!(sink, "[node_types] {}", g.node_type_count())?;
    for t in g.node_type_ids() {
        writeln!(sink, "{}\t{}", t.0, escape(g.node_type_name(t).unwrap_or_default()))?;
    }
    writeln!(sink, "[edge_types] {}", g.edge_type_count())?;
    for i in 0..g.edge_type_count() as u32 {
        let name = g.edge_type_name(EdgeTypeId(i)).unwrap_or_default();
        writeln!(sink, "{i}\t{}", escape(name))?;
    }
    writeln!(sink, "[nodes] {}", g.node_count())?;
    for v in g.node_ids() {
        let vtype = g.r_vt(v).expect("listed node exists");
        let layers: Vec<String> = g
            .r_vl(v)
            .expect("listed node exists")
            .iter()
            .map(|l| l.0.to_string())
            .collect();
        writeln!(sink, "{}\t{}\t{}", v.0, vtype.0, layers.join(","))?;
    }
    writeln!(sink, "[edges] {}", g.edge_count())?;
    for e in sorted_edges(g) {
        writeln!(
            sink,
            "{}\t{}\t{}\t{}\t{}\t{}",
            e.src.node.0, e.src.layer.0, e.dst.node.0, e.dst.layer.0, e.etype.0, e.weight
        )?;
    }
    Ok(())
}

/// Parses HMNF from raw bytes.
pub fn read_hmnf(bytes: &[u8]) -> Result<Hmn, HmnfError> {
    let text = std::str::from_utf8(bytes).map_err(|e| HmnfError::Utf8 {
        offset: e.valid_up_to(),
    })?;
    parse_hmnf(text)
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    /// Next meaningful line with its 1-based number.
    fn next(&mut self) -> Option<(usize, &'a str)> {
        for (i, raw) in self.inner.by_ref() {
            self.last = i + 1;
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            return Some((i + 1, line));
        }
        None
    }
}

pub fn parse_hmnf(text: &str) -> Result<Hmn, HmnfError> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        last: 0,
    };
    let (line, tag) = lines.next().ok_or(HmnfError::Version {
        line: 1,
        found: String::new(),
    })?;
    if tag.trim() != format!("hmnf {HMNF_VERSION}") {
        return Err(HmnfError::Version {
            line,
            found: tag.to_string(),
        });
    }
    let directed = match lines.next() {
        Some((_, l)) if l.trim() == "directed true" => true,
        Some((_, l)) if l.trim() == "directed false" => false,
        Some((line, l)) => {
            return Err(HmnfError::Directed {
                line,
                found: l.to_string(),
            })
        }
        None => {
            return Err(HmnfError::Directed {
                line: lines.last + 1,
                found: String::new(),
            })
        }
    };

    let mut sections: Vec<Vec<(usize, Vec<&str>)>> = Vec::with_capacity(SECTIONS.len());
    for &name in &SECTIONS {
        let (line, header) = lines.next().ok_or(HmnfError::SectionOrder {
            line: lines.last + 1,
            expected: name,
            found: String::new(),
        })?;
        let count = parse_header(header, name).ok_or_else(|| HmnfError::SectionOrder {
            line,
            expected: name,
            found: header.to_string(),
        })?;
        let mut records = Vec::with_capacity(count.min(1 << 16));
        while records.len() < count {
            match lines.next() {
                Some((line, l)) if l.starts_with('[') => {
                    return Err(HmnfError::Truncated {
                        line,
                        section: name,
                        expected: count,
                        found: records.len(),
                    })
                }
                Some((line, l)) => records.push((line, l.split('\t').collect())),
                None => {
                    return Err(HmnfError::Truncated {
                        line: lines.last + 1,
                        section: name,
                        expected: count,
                        found: records.len(),
                    })
                }
            }
        }
        sections.push(records);
    }
    if let Some((line, l)) = lines.next() {
        return Err(HmnfError::Trailing {
            line,
            found: l.to_string(),
        });
    }

    let layers = parse_registry(&sections[0], "layers")?;
    let node_types = parse_registry(&sections[1], "node_types")?;
    let edge_types = parse_registry(&sections[2], "edge_types")?;
    let registry_line = sections[1].first().map_or(lines.last, |r| r.0);
    let mut g = Hmn::with_types(directed, node_types, edge_types).map_err(|source| {
        HmnfError::Graph {
            line: registry_line,
            source,
        }
    })?;
    for (k, name) in layers.iter().enumerate() {
        let line = sections[0][k].0;
        g.add_layer(name)
            .map_err(|source| HmnfError::Graph { line, source })?;
    }

    for (k, (line, fields)) in sections[3].iter().enumerate() {
        let line = *line;
        let malformed = |message: String| HmnfError::Malformed {
            line,
            section: "nodes",
            message,
        };
        if fields.len() != 3 {
            return Err(malformed(format!("expected 3 fields, found {}", fields.len())));
        }
        let id = parse_u32(fields[0]).map_err(malformed)?;
        if id as usize != k {
            return Err(malformed(format!("expected node id {k}, found {id}")));
        }
        let vtype = parse_u32(fields[1]).map_err(malformed)?;
        if vtype as usize >= g.node_type_count() {
            return Err(HmnfError::Dangling {
                line,
                what: "node type",
                id: vtype,
            });
        }
        let mut layer_ids = Vec::new();
        for part in fields[2].split(',') {
            let l = parse_u32(part).map_err(malformed)?;
            if l as usize >= g.layer_count() {
                return Err(HmnfError::Dangling {
                    line,
                    what: "layer",
                    id: l,
                });
            }
            if layer_ids.contains(&LayerId(l)) {
                return Err(malformed(format!("layer {l} listed twice")));
            }
            layer_ids.push(LayerId(l));
        }
        g.add_node(NodeTypeId(vtype), &layer_ids)
            .map_err(|source| HmnfError::Graph { line, source })?;
    }

    for (line, fields) in &sections[4] {
        let line = *line;
        let malformed = |message: String| HmnfError::Malformed {
            line,
            section: "edges",
            message,
        };
        if fields.len() != 6 {
            return Err(malformed(format!("expected 6 fields, found {}", fields.len())));
        }
        let mut ids = [0u32; 5];
        for (slot, field) in ids.iter_mut().zip(fields) {
            *slot = parse_u32(field).map_err(malformed)?;
        }
        let [src, src_layer, dst, dst_layer, etype] = ids;
        for (what, id, bound) in [
            ("node", src, g.node_count()),
            ("node", dst, g.node_count()),
            ("layer", src_layer, g.layer_count()),
            ("layer", dst_layer, g.layer_count()),
            ("edge type", etype, g.edge_type_count()),
        ] {
            if id as usize >= bound {
                return Err(HmnfError::Dangling { line, what, id });
            }
        }
        let weight: f64 = fields[5]
            .trim()
            .parse()
            .map_err(|_| malformed(format!("bad weight {:?}", fields[5])))?;
        g.add_edge(
            LayeredNode::new(NodeId(src), LayerId(src_layer)),
            LayeredNode::new(NodeId(dst), LayerId(dst_layer)),
            EdgeTypeId(etype),
            weight,
        )
        .map_err(|source| HmnfError::Graph { line, source })?;
    }
    Ok(g)
}

fn parse_header(header: &str, name: &str) -> Option<usize> {
    let rest = header.trim().strip_prefix('[')?.strip_prefix(name)?.strip_prefix(']')?;
    rest.trim().parse().ok()
}

fn parse_u32(field: &str) -> Result<u32, String> {
    let f = field.trim();
    if f.is_empty() || !f.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("expected a non-negative integer, found {field:?}"));
    }
    f.parse().map_err(|_| format!("integer out of range: {field:?}"))
}

fn parse_registry(
    records: &[(usize, Vec<&str>)],
    section: &'static str,
) -> Result<Vec<String>, HmnfError> {
    records
        .iter()
        .enumerate()
        .map(|(k, (line, fields))| {
            let malformed = |message: String| HmnfError::Malformed {
                line: *line,
                section,
                message,
            };
            if fields.len() != 2 {
                return Err(malformed(format!("expected 2 fields, found {}", fields.len())));
            }
            let id = parse_u32(fields[0]).map_err(malformed)?;
            if id as usize != k {
                return Err(malformed(format!("expected id {k}, found {id}")));
            }
            unescape(fields[1]).map_err(malformed)
        })
        .collect()
}
