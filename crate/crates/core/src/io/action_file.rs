use std::collections::HashMap;
use std::fmt::Write;
use std::sync::Arc;

use super::{header, significant_lines, ParseError, Token};
use crate::action::{ElementId, ElementSet, PartialAction, PartialMap};
use crate::algebra::{ArrowId, InverseSemigroupoid};

/// The `structure = <path>` header of an action file, if present.
pub fn action_header(text: &str) -> Result<Option<String>, ParseError> {
    let Some(line) = significant_lines(text).next() else {
        return Ok(None);
    };
    if line.text.starts_with('[') {
        return Ok(None);
    }
    match line.tokens(line.text).as_slice() {
        [k, eq, path] if k.text == "structure" && eq.text == "=" => Ok(Some(path.text.to_string())),
        _ => Err(line.error(1, "expected `structure = <path>`")),
    }
}

enum Section {
    None,
    Carrier,
}

/// Parses an action file against an already loaded structure. Only names are
/// resolved here; the action axioms are left to the validators.
pub fn parse_action(text: &str, structure: Arc<InverseSemigroupoid>) -> Result<PartialAction, ParseError> {
    let n = structure.arrow_count();
    let mut carrier: Vec<String> = Vec::new();
    let mut index: HashMap<String, ElementId> = HashMap::new();
    let mut domains = vec![ElementSet::new(); n];
    let mut maps = vec![PartialMap::new(); n];
    let mut domain_seen: HashMap<ArrowId, usize> = HashMap::new();
    let mut map_seen: HashMap<ArrowId, usize> = HashMap::new();
    let mut section = Section::None;
    let mut saw_carrier = false;
    let mut first = true;

    for line in significant_lines(text) {
        let is_first = std::mem::replace(&mut first, false);
        let Some(h) = header(&line)? else {
            match section {
                Section::Carrier => {
                    for tok in line.tokens(line.text) {
                        if tok.text.contains("->") {
                            return Err(line.error(tok.column, "element names may not contain `->`"));
                        }
                        let id = ElementId(carrier.len() as u32);
                        if index.insert(tok.text.to_string(), id).is_some() {
                            return Err(line.error(tok.column, format!("repeated element `{}`", tok.text)));
                        }
                        carrier.push(tok.text.to_string());
                    }
                }
                Section::None if is_first => {
                    // The structure header, validated by `action_header`.
                    let tokens = line.tokens(line.text);
                    if !matches!(tokens.as_slice(), [k, eq, _] if k.text == "structure" && eq.text == "=") {
                        return Err(line.error(1, "expected `structure = <path>`"));
                    }
                }
                Section::None => return Err(line.error(1, "content outside a section")),
            }
            continue;
        };
        let kind = h.words[0];
        match kind.text {
            "carrier" => {
                if h.words.len() != 1 || !h.rest.trim().is_empty() {
                    return Err(line.error(kind.column, "`[carrier]` takes no arguments"));
                }
                if saw_carrier {
                    return Err(line.error(kind.column, "repeated section `carrier`"));
                }
                saw_carrier = true;
                section = Section::Carrier;
            }
            "domain" | "map" => {
                section = Section::None;
                if !saw_carrier {
                    return Err(line.error(kind.column, "`[carrier]` must come first"));
                }
                let [_, name] = h.words.as_slice() else {
                    return Err(line.error(kind.column, format!("expected `[{} <arrow>]`", kind.text)));
                };
                let s = structure
                    .arrow_by_name(name.text)
                    .ok_or_else(|| line.error(name.column, format!("unknown arrow `{}`", name.text)))?;
                let rest = h.rest.trim_start();
                let Some(body) = rest.strip_prefix('=') else {
                    return Err(line.error(line.column_of(h.rest), "expected `=`"));
                };
                let seen = if kind.text == "domain" { &mut domain_seen } else { &mut map_seen };
                if seen.insert(s, line.number).is_some() {
                    return Err(line.error(
                        kind.column,
                        format!("repeated `[{} {}]`", kind.text, name.text),
                    ));
                }
                let elem = |tok: Token, text: &str, column: usize| {
                    index
                        .get(text)
                        .copied()
                        .ok_or_else(|| line.error(column, format!("unknown element `{}`", tok.text)))
                };
                for tok in line.tokens(body) {
                    if kind.text == "domain" {
                        domains[s.index()].insert(elem(tok, tok.text, tok.column)?);
                        continue;
                    }
                    let Some((x, y)) = tok.text.split_once("->") else {
                        return Err(line.error(tok.column, "expected `x->y`"));
                    };
                    let (x_id, y_id) = (
                        elem(tok, x, tok.column)?,
                        elem(tok, y, tok.column + x.chars().count() + 2)?,
                    );
                    if maps[s.index()].insert(x_id, y_id).is_some() {
                        return Err(line.error(tok.column, format!("repeated entry for `{x}`")));
                    }
                }
            }
            other => return Err(line.error(kind.column, format!("unknown section `{other}`"))),
        }
    }
    if !saw_carrier {
        return Err(ParseError::new(1, 1, "missing section `[carrier]`"));
    }
    PartialAction::new(structure, carrier, domains, maps).map_err(|e| ParseError::new(1, 1, e.to_string()))
}

/// Canonical text of an action; every arrow gets a domain and a map line.
pub fn print_action(act: &PartialAction, structure_path: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(p) = structure_path {
        let _ = writeln!(out, "structure = {p}");
    }
    out.push_str("[carrier]\n");
    if act.carrier_size() > 0 {
        out.push_str(&act.carrier_names().join(" "));
        out.push('\n');
    }
    let isg = act.structure();
    let join = |items: Vec<String>| {
        if items.is_empty() {
            String::new()
        } else {
            format!(" {}", items.join(" "))
        }
    };
    for s in isg.arrows() {
        let names = act.domain(s).iter().map(|&x| act.element_name(x).to_string()).collect();
        let _ = writeln!(out, "[domain {}] ={}", isg.arrow_name(s), join(names));
    }
    for s in isg.arrows() {
        let pairs = act
            .map(s)
            .iter()
            .map(|(&x, &y)| format!("{}->{}", act.element_name(x), act.element_name(y)))
            .collect();
        let _ = writeln!(out, "[map {}] ={}", isg.arrow_name(s), join(pairs));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{demo_structure, demo_x, demo_x_as_printed};

    #[test]
    fn demo_x_round_trips() {
        let act = demo_x();
        let text = print_action(&act, Some("demo_s.isgd"));
        assert_eq!(action_header(&text).unwrap().as_deref(), Some("demo_s.isgd"));
        let parsed = parse_action(&text, act.structure().clone()).unwrap();
        assert_eq!(parsed, act);
        assert_eq!(print_action(&parsed, Some("demo_s.isgd")), text);
    }

    #[test]
    fn semantic_errors_are_deferred() {
        // The misprinted domain is a validator concern, not a parse error.
        let text = print_action(&demo_x_as_printed(), None);
        assert!(parse_action(&text, demo_structure()).is_ok());
    }

    #[test]
    fn positioned_errors() {
        let s = demo_structure();
        let err = parse_action("[carrier]\n1 2\n[domain q] = 1\n", s.clone()).unwrap_err();
        assert_eq!((err.line, err.column), (3, 9));
        let err = parse_action("[carrier]\n1 2\n[map a] = 1->3\n", s.clone()).unwrap_err();
        assert_eq!((err.line, err.column), (3, 14));
        let err = parse_action("[carrier]\n1 2\n[map a] = 1-2\n", s.clone()).unwrap_err();
        assert_eq!((err.line, err.column), (3, 11));
        let err = parse_action("[carrier]\n1 1\n", s.clone()).unwrap_err();
        assert_eq!((err.line, err.column), (2, 3));
        let err = parse_action("[carrier]\n1\n[domain a] 1\n", s.clone()).unwrap_err();
        assert_eq!(err.line, 3);
        let err = parse_action("[carrier]\n1\n[domain a] = 1\n[domain a] = 1\n", s).unwrap_err();
        assert_eq!(err.line, 4);
        assert!(action_header("[carrier]\n").unwrap().is_none());
        assert!(action_header("structure demo.isgd\n").is_err());
    }
}
