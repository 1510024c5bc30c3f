//! Declarative text format for presentations.
//!
//! ```text
//! # comments start with '#'
//! name   ccr-1d
//! param  omega
//! gen    X even herm
//! gen    P even herm
//! gen    a even conj=ad
//! gen    ad even conj=a
//! order  X P a ad
//! rel    [X, P] = i*hbar
//! rel    [a, ad] = 1
//! default zero
//! ```
//!
//! `default zero` (the default) makes unlisted pairs supercommute;
//! `default strict` leaves them undefined.

use crate::algebra::{KernelError, MissingPairs, Parity, Presentation, PresentationBuilder, Result};

impl Presentation {
    pub fn from_text(text: &str) -> Result<Presentation> {
        let mut b = PresentationBuilder::new("unnamed");
        let mut named = false;
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let err = |message: String| KernelError::Format { line: line_no, message };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            match key {
                "name" => {
                    if named {
                        return Err(err("duplicate name line".into()));
                    }
                    named = true;
                    b = b.with_name(rest);
                }
                "param" => {
                    for p in rest.split_whitespace() {
                        if !is_ident(p) {
                            return Err(err(format!("bad parameter name `{p}`")));
                        }
                        b = b.param(p);
                    }
                }
                "gen" => {
                    let f: Vec<&str> = rest.split_whitespace().collect();
                    if f.len() != 3 || !is_ident(f[0]) {
                        return Err(err("expected `gen NAME even|odd herm|conj=NAME`".into()));
                    }
                    let parity = match f[1] {
                        "even" => Parity::Even,
                        "odd" => Parity::Odd,
                        o => return Err(err(format!("unknown parity `{o}`"))),
                    };
                    b = match (f[2], f[2].strip_prefix("conj=")) {
                        ("herm", _) => b.generator(f[0], parity),
                        (_, Some(partner)) if is_ident(partner) => b.generator_with_star(f[0], parity, partner),
                        (o, _) => return Err(err(format!("unknown star spec `{o}`"))),
                    };
                }
                "order" => {
                    b = b.order(rest.split_whitespace().map(String::from).collect());
                }
                "rel" => {
                    let (lhs, rhs) = rest.split_once('=').ok_or_else(|| err("expected `rel [A, B] = expr`".into()))?;
                    let inner = lhs
                        .trim()
                        .strip_prefix('[')
                        .and_then(|s| s.strip_suffix(']'))
                        .ok_or_else(|| err("left side must be `[A, B]`".into()))?;
                    let (a, bb) = inner.split_once(',').ok_or_else(|| err("left side must be `[A, B]`".into()))?;
                    b = b.relation(a.trim(), bb.trim(), rhs.trim());
                }
                "default" => {
                    b = b.missing_pairs(match rest {
                        "zero" => MissingPairs::Supercommute,
                        "strict" => MissingPairs::Undefined,
                        o => return Err(err(format!("unknown default `{o}`"))),
                    });
                }
                o => return Err(err(format!("unknown directive `{o}`"))),
            }
        }
        b.build()
    }
}

fn is_ident(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(h) if h.is_ascii_alphabetic() || h == '_')
        && c.all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
}
