// SPDX-License-Identifier: Apache-2.0
//! ISCAS-89 `.bench` reader and writer.
//!
//! Besides the standard keywords, two flip-flop extensions are accepted so
//! that transformed designs can be read back: `q = NVFF(d)` and
//! `q = LEFF_<hex>(leaf1, ..., leafK)`.

use std::fmt::Write;

use super::{FfKind, GateKind, Netlist, NetlistBuilder, NetlistError, Result};
use crate::pglib::BooleanFunction;

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
}

fn is_ident_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, '(' | ')' | ',' | '=' | '#')
}

impl<'a> Cursor<'a> {
    fn column(&self) -> usize {
        self.text[..self.pos].chars().count() + 1
    }

    fn err(&self, message: impl Into<String>) -> NetlistError {
        NetlistError::Syntax {
            line: self.line,
            column: self.column(),
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.text.len()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(c) => Err(self.err(format!("expected `{want}`, found `{c}`"))),
            None => Err(self.err(format!("expected `{want}`, found end of line"))),
        }
    }

    fn ident(&mut self) -> Result<(&'a str, usize)> {
        self.skip_ws();
        let col = self.column();
        let start = self.pos;
        while let Some(c) = self.text[self.pos..].chars().next() {
            if is_ident_char(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        if self.pos == start {
            return Err(self.err("expected identifier"));
        }
        Ok((&self.text[start..self.pos], col))
    }

    /// `( id {, id} )`, optionally allowing an empty list.
    fn arg_list(&mut self, allow_empty: bool) -> Result<Vec<&'a str>> {
        self.expect('(')?;
        let mut args = Vec::new();
        if allow_empty && self.peek() == Some(')') {
            self.pos += 1;
            return Ok(args);
        }
        loop {
            args.push(self.ident()?.0);
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(')') => {
                    self.pos += 1;
                    return Ok(args);
                }
                Some(c) => return Err(self.err(format!("expected `,` or `)`, found `{c}`"))),
                None => return Err(self.err("unterminated argument list")),
            }
        }
    }
}

fn parse_leff_table(hex: &str, arity: usize, line: usize, column: usize) -> Result<BooleanFunction> {
    let bad = |message: String| NetlistError::Syntax {
        line,
        column,
        message,
    };
    if arity > BooleanFunction::MAX_ARITY {
        return Err(bad(format!(
            "LEFF arity {arity} exceeds {}",
            BooleanFunction::MAX_ARITY
        )));
    }
    let table = u64::from_str_radix(hex, 16)
        .map_err(|_| bad(format!("invalid LEFF truth table `{hex}`")))?;
    BooleanFunction::new(arity, table)
        .ok_or_else(|| bad(format!("truth table 0x{hex} too wide for arity {arity}")))
}

/// Parses `.bench` text into a validated netlist.
pub fn parse_bench(name: &str, text: &str) -> Result<Netlist> {
    let mut b = NetlistBuilder::new(name);
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut cur = Cursor {
            text: content,
            pos: 0,
            line: line_no,
        };
        if cur.at_end() {
            continue;
        }
        b.at_line(line_no);
        let (first, first_col) = cur.ident()?;
        match cur.peek() {
            Some('(') => {
                let args = cur.arg_list(false)?;
                if args.len() != 1 {
                    return Err(NetlistError::Syntax {
                        line: line_no,
                        column: first_col,
                        message: format!("`{first}` takes exactly one net"),
                    });
                }
                match first.to_ascii_uppercase().as_str() {
                    "INPUT" => b.add_input(args[0]),
                    "OUTPUT" => b.add_output(args[0]),
                    _ => {
                        return Err(NetlistError::Syntax {
                            line: line_no,
                            column: first_col,
                            message: format!("unknown declaration `{first}`"),
                        })
                    }
                };
            }
            Some('=') => {
                cur.pos += 1;
                let (kw, kw_col) = cur.ident()?;
                let upper = kw.to_ascii_uppercase();
                if let Some(hex) = upper.strip_prefix("LEFF_") {
                    let args = cur.arg_list(true)?;
                    let f = parse_leff_table(hex, args.len(), line_no, kw_col)?;
                    b.add_ff(first, FfKind::LeFf, &args, Some(f));
                } else {
                    let args = cur.arg_list(false)?;
                    match upper.as_str() {
                        "DFF" => b.add_ff(first, FfKind::Dff, &args, None),
                        "NVFF" => b.add_ff(first, FfKind::NvFf, &args, None),
                        _ => match GateKind::from_keyword(kw) {
                            Some(kind) => b.add_gate(first, kind, &args),
                            None => {
                                return Err(NetlistError::UnsupportedGate {
                                    kind: kw.to_string(),
                                    line: line_no,
                                    column: kw_col,
                                })
                            }
                        },
                    };
                }
            }
            Some(c) => return Err(cur.err(format!("expected `(` or `=`, found `{c}`"))),
            None => return Err(cur.err("unexpected end of line")),
        }
        if !cur.at_end() {
            return Err(cur.err("trailing characters"));
        }
    }
    b.build()
}

/// Writes a netlist in `.bench` syntax. LE-FFs are written as
/// `q = LEFF_<hex>(leaves...)`, each preceded by a `# leff` comment.
pub fn emit_bench(n: &Netlist) -> String {
    let mut out = String::new();
    let volatile = n.count_ffs(FfKind::Dff);
    let _ = writeln!(out, "# {}", n.name());
    let _ = writeln!(out, "# {} inputs", n.inputs().len());
    let _ = writeln!(out, "# {} outputs", n.outputs().len());
    let _ = writeln!(
        out,
        "# {} flip-flops ({} DFF, {} NVFF, {} LEFF)",
        n.ffs().len(),
        volatile,
        n.count_ffs(FfKind::NvFf),
        n.count_ffs(FfKind::LeFf)
    );
    let _ = writeln!(out, "# {} gates", n.gates().len());
    out.push('\n');
    for &i in n.inputs() {
        let _ = writeln!(out, "INPUT({})", n.net_name(i));
    }
    out.push('\n');
    for &o in n.outputs() {
        let _ = writeln!(out, "OUTPUT({})", n.net_name(o));
    }
    if !n.ffs().is_empty() {
        out.push('\n');
    }
    for ff in n.ffs() {
        let args = join_nets(n, &ff.inputs);
        let q = n.net_name(ff.output);
        match (&ff.kind, &ff.function) {
            (FfKind::LeFf, Some(f)) => {
                let _ = writeln!(out, "# leff arity={} table=0x{}", f.arity(), f.hex());
                let _ = writeln!(out, "{q} = LEFF_{}({args})", f.hex());
            }
            (kind, _) => {
                let _ = writeln!(out, "{q} = {}({args})", kind.keyword());
            }
        }
    }
    if !n.gates().is_empty() {
        out.push('\n');
    }
    for g in n.gates() {
        let _ = writeln!(
            out,
            "{} = {}({})",
            n.net_name(g.output),
            g.kind.keyword(),
            join_nets(n, &g.inputs)
        );
    }
    out
}

fn join_nets(n: &Netlist, nets: &[super::NetId]) -> String {
    nets.iter()
        .map(|&x| n.net_name(x))
        .collect::<Vec<_>>()
        .join(", ")
}
