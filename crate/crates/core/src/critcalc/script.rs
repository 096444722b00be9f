//! Line-oriented proof scripts.
//!
//! ```text
//! script <name>
//! regular <const> ...
//! def <id>: <const> = <ordinal>
//! hyp <id>: <relation>
//! claim <id>: <relation>
//! step <id>: <relation> by <rule> [from <id>, ...] [with <var>=<expr>, ...]
//! goal <id>, ...
//! end
//! ```
//!
//! `#` starts a comment. A file may hold several scripts.

use crate::term::NameTable;

use super::expr::{OrdConst, Parser, Relation};
use super::CalcError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Regular(Vec<OrdConst>),
    Def { id: String, rel: Relation },
    Hyp { id: String, rel: Relation },
    Claim { id: String, rel: Relation },
    Step(Step),
    Goal(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub id: String,
    pub rel: Relation,
    pub rule: String,
    pub from: Vec<String>,
    /// Raw `var=expr` pairs; parsed against the variable's kind at check time.
    pub with: Vec<(String, String)>,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofScript {
    pub name: String,
    pub items: Vec<(usize, Item)>,
}

impl ProofScript {
    pub fn step_mut(&mut self, id: &str) -> Option<&mut Step> {
        self.items.iter_mut().find_map(|(_, it)| match it {
            Item::Step(s) if s.id == id => Some(s),
            _ => None,
        })
    }

    pub fn goals(&self) -> impl Iterator<Item = &str> {
        self.items.iter().flat_map(|(_, it)| match it {
            Item::Goal(g) => g.iter().map(String::as_str).collect::<Vec<_>>(),
            _ => Vec::new(),
        })
    }
}

fn perr(line: usize, msg: impl Into<String>) -> CalcError {
    CalcError::Parse {
        line,
        msg: msg.into(),
    }
}

fn labelled<'t>(rest: &'t str, line: usize) -> Result<(String, &'t str), CalcError> {
    let (id, body) = rest
        .split_once(':')
        .ok_or_else(|| perr(line, "expected `<id>: ...`"))?;
    let id = id.trim();
    if id.is_empty() || !id.chars().all(|c| c.is_ascii_alphanumeric() || "_-.'".contains(c)) {
        return Err(perr(line, format!("bad fact id `{id}`")));
    }
    Ok((id.to_string(), body.trim()))
}

/// Splits on commas outside parentheses.
fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out.retain(|p| !p.is_empty());
    out
}

pub fn parse_scripts(text: &str, names: &NameTable) -> Result<Vec<ProofScript>, CalcError> {
    let p = Parser::new(names);
    let rel = |s: &str, line: usize| p.relation(s).map_err(|m| perr(line, m));
    let mut out = Vec::new();
    let mut cur: Option<ProofScript> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            continue;
        }
        let (kw, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        let rest = rest.trim();
        if kw == "script" {
            if cur.is_some() {
                return Err(perr(line, "nested `script`"));
            }
            if rest.is_empty() {
                return Err(perr(line, "script needs a name"));
            }
            cur = Some(ProofScript {
                name: rest.to_string(),
                items: Vec::new(),
            });
            continue;
        }
        let sc = cur
            .as_mut()
            .ok_or_else(|| perr(line, format!("`{kw}` outside a script")))?;
        let item = match kw {
            "end" => {
                out.push(cur.take().expect("open script"));
                continue;
            }
            "regular" => Item::Regular(
                rest.split_whitespace()
                    .map(|w| {
                        OrdConst::from_name(w).ok_or_else(|| perr(line, format!("unknown constant `{w}`")))
                    })
                    .collect::<Result<_, _>>()?,
            ),
            "def" | "hyp" | "claim" => {
                let (id, body) = labelled(rest, line)?;
                let r = rel(body, line)?;
                match kw {
                    "def" => Item::Def { id, rel: r },
                    "hyp" => Item::Hyp { id, rel: r },
                    _ => Item::Claim { id, rel: r },
                }
            }
            "goal" => Item::Goal(split_top(rest).into_iter().map(str::to_string).collect()),
            "step" => {
                let (id, body) = labelled(rest, line)?;
                let (r, just) = body
                    .rsplit_once(" by ")
                    .ok_or_else(|| perr(line, "step needs `by <rule>`"))?;
                let (just, with) = match just.split_once(" with ") {
                    Some((a, b)) => (a, Some(b)),
                    None => (just, None),
                };
                let (rule, from) = match just.split_once(" from ") {
                    Some((a, b)) => (a.trim(), split_top(b)),
                    None => (just.trim(), Vec::new()),
                };
                let with = match with {
                    None => Vec::new(),
                    Some(w) => split_top(w)
                        .into_iter()
                        .map(|kv| {
                            kv.split_once('=')
                                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                                .ok_or_else(|| perr(line, format!("bad binding `{kv}`")))
                        })
                        .collect::<Result<_, _>>()?,
                };
                Item::Step(Step {
                    id,
                    rel: rel(r, line)?,
                    rule: rule.to_string(),
                    from: from.into_iter().map(str::to_string).collect(),
                    with,
                    line,
                })
            }
            other => return Err(perr(line, format!("unknown keyword `{other}`"))),
        };
        sc.items.push((line, item));
    }
    if let Some(sc) = cur {
        return Err(perr(text.lines().count(), format!("script `{}` lacks `end`", sc.name)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_steps_with_bindings() {
        let text = "script t\n\
                    hyp h: crit(e) >= kappa2  # comment\n\
                    step s: e(kappa1) = kappa1 by below-crit from h, d with e=j9(j14), beta=kappa1\n\
                    goal s\nend\n";
        let s = parse_scripts(text, &NameTable::prelude()).unwrap();
        assert_eq!(s.len(), 1);
        let Item::Step(st) = &s[0].items[1].1 else { panic!() };
        assert_eq!(st.rule, "below-crit");
        assert_eq!(st.from, ["h", "d"]);
        assert_eq!(st.with[0], ("e".into(), "j9(j14)".into()));
        assert_eq!(s[0].goals().collect::<Vec<_>>(), ["s"]);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_scripts("script t\nstep x: kappa1 < by chain\nend", &NameTable::prelude())
            .unwrap_err();
        assert!(matches!(err, CalcError::Parse { line: 2, .. }));
        assert!(parse_scripts("script t\n", &NameTable::prelude()).is_err());
    }
}
