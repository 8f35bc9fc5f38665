//! Graph expressions: `K n`, `P n`, `C n`, `circ n: s,...`, `edges n: u-v,...`,
//! `tensor(<g>,<g>)` and `cover(<g>,<g>)`.

use pairwalk::{CoverPolicy, Graph};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{msg} at column {}", .pos + 1)]
pub struct ParseError {
    /// Byte offset into the input.
    pub pos: usize,
    pub msg: String,
}

impl ParseError {
    /// The input with a caret under the failing column.
    pub fn render(&self, input: &str) -> String {
        format!("{self}\n  {input}\n  {}^", " ".repeat(self.pos))
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos, msg: msg.into() })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn word(&mut self) -> &'a str {
        self.skip_ws();
        let len = self.rest().find(|c: char| !c.is_ascii_alphabetic()).unwrap_or(self.rest().len());
        let w = &self.rest()[..len];
        self.pos += len;
        w
    }

    fn number(&mut self) -> Result<usize, ParseError> {
        self.skip_ws();
        let len = self.rest().find(|c: char| !c.is_ascii_digit()).unwrap_or(self.rest().len());
        if len == 0 {
            return self.err("expected a number");
        }
        let start = self.pos;
        self.pos += len;
        self.src[start..self.pos].parse().or_else(|_| {
            self.pos = start;
            self.err("number too large")
        })
    }

    fn at_list_end(&mut self) -> bool {
        self.skip_ws();
        self.rest().is_empty() || self.rest().starts_with([',', ')'])
    }

    fn graph(&mut self) -> Result<Graph, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let built = match self.word() {
            "K" => Graph::complete(self.number()?),
            "P" => Graph::path(self.number()?),
            "C" => Graph::cycle(self.number()?),
            "circ" => {
                let n = self.number()?;
                self.expect(':')?;
                let mut conn = vec![self.number()?];
                while self.eat(',') {
                    conn.push(self.number()?);
                }
                Graph::circulant(n, &conn)
            }
            "edges" => {
                let n = self.number()?;
                self.expect(':')?;
                let mut edges = Vec::new();
                if !self.at_list_end() {
                    loop {
                        let u = self.number()?;
                        self.expect('-')?;
                        edges.push((u, self.number()?));
                        // a comma followed by another edge, not the closing comma of tensor(...)
                        let save = self.pos;
                        if !self.eat(',') {
                            break;
                        }
                        self.skip_ws();
                        if !self.rest().starts_with(|c: char| c.is_ascii_digit()) {
                            self.pos = save;
                            break;
                        }
                    }
                }
                Graph::from_edges(n, &edges)
            }
            w @ ("tensor" | "cover") => {
                self.expect('(')?;
                let g = self.graph()?;
                self.expect(',')?;
                let h = self.graph()?;
                self.expect(')')?;
                if w == "tensor" {
                    Ok(g.tensor_product(&h))
                } else {
                    g.double_cover(&h, CoverPolicy::Permissive)
                }
            }
            "" => {
                self.pos = start;
                return self.err("expected a graph");
            }
            other => {
                self.pos = start;
                return self.err(format!("unknown graph family '{other}'"));
            }
        };
        built.map_err(|e| ParseError { pos: start, msg: e.to_string() })
    }
}

pub fn parse_graph(src: &str) -> Result<Graph, ParseError> {
    let mut p = Parser { src, pos: 0 };
    let g = p.graph()?;
    p.skip_ws();
    if !p.rest().is_empty() {
        return p.err("unexpected trailing input");
    }
    Ok(g)
}
