//! Extended Newick reading and canonical writing.
//!
//! Reticulations are tagged `#H<n>` and appear exactly twice; the occurrence
//! that carries the subtree comes first in the written form. The writer is
//! canonical: children are ordered by their sorted descendant taxa, and when
//! two distinct children have the same descendant taxa every ordering is
//! tried and the lexicographically smallest text wins. Two networks are
//! therefore isomorphic exactly when their written forms coincide, which is
//! what [`canonical_key`] relies on.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use crate::network::{Network, NetworkBuilder, NodeId};

/// A syntax or consistency error with its 1-based position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

pub fn is_valid_taxon(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-'))
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
    builder: NetworkBuilder,
    hybrids: HashMap<String, HybridState>,
    taxa: HashMap<String, (usize, usize)>,
}

struct HybridState {
    node: NodeId,
    occurrences: usize,
    defined: bool,
    first_at: (usize, usize),
}

impl Parser {
    fn new(text: &str) -> Self {
        Parser {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
            builder: NetworkBuilder::new(),
            hybrids: HashMap::new(),
            taxa: HashMap::new(),
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.col,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        self.skip_ws();
        match self.peek() {
            Some(x) if x == c => {
                self.bump();
                Ok(())
            }
            Some(x) => Err(self.error(format!("expected `{c}`, found `{x}`"))),
            None => Err(self.error(format!("expected `{c}`, found end of input"))),
        }
    }

    fn word(&mut self) -> String {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_whitespace() || "(),;:#[]".contains(c) {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }

    fn skip_length(&mut self) -> Result<(), ParseError> {
        // branch lengths, support values and probabilities are ignored
        while self.peek() == Some(':') {
            self.bump();
            let w = self.word();
            if !w.is_empty() && w.parse::<f64>().is_err() {
                return Err(self.error(format!("bad branch length `{w}`")));
            }
        }
        Ok(())
    }

    fn node(&mut self) -> Result<NodeId, ParseError> {
        self.skip_ws();
        let start = (self.line, self.col);
        let mut kids = Vec::new();
        if self.peek() == Some('(') {
            self.bump();
            loop {
                kids.push(self.node()?);
                self.skip_ws();
                match self.bump() {
                    Some(',') => continue,
                    Some(')') => break,
                    Some(c) => {
                        return Err(ParseError {
                            line: self.line,
                            column: self.col - 1,
                            message: format!("expected `,` or `)`, found `{c}`"),
                        })
                    }
                    None => return Err(self.error("unbalanced parentheses")),
                }
            }
        }
        self.skip_ws();
        let name = self.word();
        let tag = if self.peek() == Some('#') {
            self.bump();
            let t = self.word();
            if t.is_empty() {
                return Err(self.error("empty reticulation tag"));
            }
            Some(t)
        } else {
            None
        };
        self.skip_length()?;

        if let Some(tag) = tag {
            let node = match self.hybrids.get(&tag) {
                Some(h) => h.node,
                None => {
                    let node = self.builder.add_node();
                    self.hybrids.insert(
                        tag.clone(),
                        HybridState {
                            node,
                            occurrences: 0,
                            defined: false,
                            first_at: start,
                        },
                    );
                    node
                }
            };
            let h = self.hybrids.get_mut(&tag).expect("just inserted");
            h.occurrences += 1;
            if h.occurrences > 2 {
                return Err(ParseError {
                    line: start.0,
                    column: start.1,
                    message: format!("reticulation #{tag} occurs more than twice"),
                });
            }
            if !kids.is_empty() {
                if h.defined {
                    return Err(ParseError {
                        line: start.0,
                        column: start.1,
                        message: format!("reticulation #{tag} has children in both occurrences"),
                    });
                }
                h.defined = true;
                for k in kids {
                    self.builder.add_arc(node, k);
                }
            }
            return Ok(node);
        }

        if kids.is_empty() {
            if name.is_empty() {
                return Err(ParseError {
                    line: start.0,
                    column: start.1,
                    message: "leaf without a label".into(),
                });
            }
            if !is_valid_taxon(&name) {
                return Err(ParseError {
                    line: start.0,
                    column: start.1,
                    message: format!("invalid taxon name `{name}`"),
                });
            }
            if let Some(&(l, c)) = self.taxa.get(&name) {
                return Err(ParseError {
                    line: start.0,
                    column: start.1,
                    message: format!("duplicate taxon `{name}` (first at {l}:{c})"),
                });
            }
            self.taxa.insert(name.clone(), start);
            return Ok(self.builder.add_leaf(name));
        }
        // internal labels are ignored
        let v = self.builder.add_node();
        for k in kids {
            self.builder.add_arc(v, k);
        }
        Ok(v)
    }

    fn network(mut self) -> Result<Network, ParseError> {
        let root = self.node()?;
        self.expect(';')?;
        self.skip_ws();
        if self.peek().is_some() {
            return Err(self.error("trailing characters after `;`"));
        }
        let mut dangling: Vec<(&String, &HybridState)> = self
            .hybrids
            .iter()
            .filter(|(_, h)| h.occurrences < 2)
            .collect();
        dangling.sort_by_key(|(_, h)| h.first_at);
        if let Some((tag, h)) = dangling.first() {
            return Err(ParseError {
                line: h.first_at.0,
                column: h.first_at.1,
                message: format!("dangling reticulation tag #{tag}"),
            });
        }
        let _ = root;
        Ok(self.builder.build())
    }
}

/// Parses one extended Newick network terminated by `;`.
pub fn parse(text: &str) -> Result<Network, ParseError> {
    Parser::new(text).network()
}

/// Sorted descendant leaf ranks per vertex.
fn below_ranks(net: &Network) -> Vec<Vec<u32>> {
    let mut names: Vec<(&str, NodeId)> = net.leaves().map(|(v, l)| (l, v)).collect();
    names.sort();
    let mut rank = vec![u32::MAX; net.node_count()];
    for (i, &(_, v)) in names.iter().enumerate() {
        rank[v] = i as u32;
    }
    let mut below: Vec<Vec<u32>> = vec![Vec::new(); net.node_count()];
    let order = net
        .topological_order()
        .unwrap_or_else(|| (0..net.node_count()).collect());
    for &v in order.iter().rev() {
        let mut s: Vec<u32> = Vec::new();
        if rank[v] != u32::MAX {
            s.push(rank[v]);
        }
        for &c in net.children(v) {
            s.extend_from_slice(&below[c]);
        }
        s.sort_unstable();
        s.dedup();
        below[v] = s;
    }
    below
}

struct Writer<'a> {
    net: &'a Network,
    order: &'a [Vec<NodeId>],
    /// Reticulation number of each vertex already entered, 0 if none.
    tags: Vec<usize>,
    next_tag: usize,
    visiting: Vec<bool>,
    out: String,
}

impl Writer<'_> {
    fn tag(&mut self, k: usize) {
        self.out.push_str("#H");
        let _ = write!(self.out, "{k}");
    }

    fn node(&mut self, v: NodeId) {
        let hybrid = self.net.indegree(v) >= 2;
        if self.tags[v] > 0 {
            self.tag(self.tags[v]);
            return;
        }
        if self.visiting[v] {
            self.out.push_str("#?");
            return;
        }
        self.visiting[v] = true;
        if hybrid {
            self.next_tag += 1;
            self.tags[v] = self.next_tag;
        }
        let kids = &self.order[v];
        if !kids.is_empty() {
            self.out.push('(');
            for (i, &c) in kids.iter().enumerate() {
                if i > 0 {
                    self.out.push(',');
                }
                self.node(c);
            }
            self.out.push(')');
        } else if let Some(l) = self.net.label(v) {
            self.out.push_str(l);
        }
        if hybrid {
            self.tag(self.tags[v]);
        }
    }
}

fn render(net: &Network, order: &[Vec<NodeId>]) -> String {
    let mut w = Writer {
        net,
        order,
        tags: vec![0; net.node_count()],
        next_tag: 0,
        visiting: vec![false; net.node_count()],
        out: String::with_capacity(8 * net.node_count()),
    };
    if net.node_count() > 0 {
        w.node(net.root());
    }
    w.out.push(';');
    w.out
}

/// Canonical extended Newick text.
pub fn write(net: &Network) -> String {
    let below = below_ranks(net);
    let mut order: Vec<Vec<NodeId>> = (0..net.node_count())
        .map(|v| {
            let mut cs = net.children(v).to_vec();
            cs.sort_by(|&a, &b| below[a].cmp(&below[b]).then(a.cmp(&b)));
            cs
        })
        .collect();
    // Vertices whose child order is not fixed by descendant taxa.
    let ties: Vec<NodeId> = (0..net.node_count())
        .filter(|&v| {
            let cs = &order[v];
            cs.windows(2)
                .any(|w| w[0] != w[1] && below[w[0]] == below[w[1]])
        })
        .collect();
    if ties.is_empty() {
        return render(net, &order);
    }
    // Only binary vertices occur in valid networks; a tie flips the pair.
    let limit = ties.len().min(20);
    let mut best: Option<String> = None;
    for mask in 0u64..(1u64 << limit) {
        for (i, &v) in ties.iter().take(limit).enumerate() {
            let cs = &mut order[v];
            let flipped = cs.first() > cs.last();
            if ((mask >> i) & 1 == 1) != flipped {
                cs.reverse();
            }
        }
        let s = render(net, &order);
        if best.as_ref().is_none_or(|b| s < *b) {
            best = Some(s);
        }
    }
    best.expect("at least one rendering")
}

/// Key under which isomorphic networks coincide.
pub fn canonical_key(net: &Network) -> String {
    write(net)
}

/// Graphviz rendering, leaves labelled and reticulations drawn as boxes.
pub fn to_dot(net: &Network) -> String {
    let mut s = String::from("digraph network {\n");
    for v in 0..net.node_count() {
        match net.label(v) {
            Some(l) if net.is_leaf(v) => s.push_str(&format!("  n{v} [label=\"{l}\"];\n")),
            _ if net.is_reticulation(v) => s.push_str(&format!(
                "  n{v} [label=\"\", shape=box, width=0.15, height=0.15];\n"
            )),
            _ => s.push_str(&format!("  n{v} [label=\"\", shape=point];\n")),
        }
    }
    for (u, v) in net.arcs() {
        s.push_str(&format!("  n{u} -> n{v};\n"));
    }
    s.push_str("}\n");
    s
}
