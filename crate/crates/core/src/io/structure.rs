use std::collections::HashMap;
use std::fmt::Write;

use super::{header, significant_lines, Line, ParseError, Token};
use crate::algebra::{ArrowId, SemigroupoidTable, StructureError};

/// A parsed `.isgd` file: the table and the optional `[inverse]` declarations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedStructure {
    pub table: SemigroupoidTable,
    pub declared_inverse: Vec<(ArrowId, ArrowId)>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Objects,
    Arrows,
    Mul,
    Inverse,
}

struct Pending<'a> {
    line: usize,
    column: usize,
    tokens: [Token<'a>; 3],
}

fn expect_shape<'a>(line: &Line<'a>, shape: &[Option<&str>]) -> Result<Vec<Token<'a>>, ParseError> {
    let tokens = line.tokens(line.text);
    let describe = || {
        shape
            .iter()
            .map(|t| t.unwrap_or("name"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    if tokens.len() != shape.len() {
        let column = tokens.get(shape.len()).map_or(1, |t| t.column);
        return Err(line.error(column, format!("expected `{}`", describe())));
    }
    for (tok, want) in tokens.iter().zip(shape) {
        if let Some(w) = want {
            if tok.text != *w {
                return Err(line.error(tok.column, format!("expected `{w}`, found `{}`", tok.text)));
            }
        }
    }
    Ok(tokens)
}

/// Parses a structure file. Missing products on composable pairs, products
/// on non-composable pairs and repeated lines are rejected here; the algebraic
/// axioms are left to the validators.
pub fn parse_structure(text: &str) -> Result<ParsedStructure, ParseError> {
    let mut section = Section::None;
    let mut seen = HashMap::new();
    let mut objects: Vec<Token> = Vec::new();
    let mut arrows: Vec<(Token, Token, Token, usize)> = Vec::new();
    let mut products: Vec<Pending> = Vec::new();
    let mut inverses: Vec<Pending> = Vec::new();
    let mut mul_header = (0, 1);
    let mut last_line = 0;

    for line in significant_lines(text) {
        last_line = line.number;
        if let Some(h) = header(&line)? {
            let name = h.words[0];
            if h.words.len() != 1 || !h.rest.trim().is_empty() {
                return Err(line.error(name.column, "unexpected text after section header"));
            }
            section = match name.text {
                "objects" => Section::Objects,
                "arrows" => Section::Arrows,
                "mul" => Section::Mul,
                "inverse" => Section::Inverse,
                other => return Err(line.error(name.column, format!("unknown section `{other}`"))),
            };
            if seen.insert(name.text, line.number).is_some() {
                return Err(line.error(name.column, format!("repeated section `{}`", name.text)));
            }
            if section == Section::Mul {
                mul_header = (line.number, 1);
            }
            continue;
        }
        match section {
            Section::None => return Err(line.error(1, "content before the first section")),
            Section::Objects => objects.extend(line.tokens(line.text)),
            Section::Arrows => {
                let t = expect_shape(&line, &[None, Some(":"), None, Some("->"), None])?;
                arrows.push((t[0], t[2], t[4], line.number));
            }
            Section::Mul => {
                let t = expect_shape(&line, &[None, None, Some("="), None])?;
                products.push(Pending {
                    line: line.number,
                    column: t[0].column,
                    tokens: [t[0], t[1], t[3]],
                });
            }
            Section::Inverse => {
                let t = expect_shape(&line, &[None, Some("="), None])?;
                inverses.push(Pending {
                    line: line.number,
                    column: t[0].column,
                    tokens: [t[0], t[2], t[2]],
                });
            }
        }
    }
    for required in ["objects", "arrows", "mul"] {
        if !seen.contains_key(required) {
            return Err(ParseError::new(last_line + 1, 1, format!("missing section `[{required}]`")));
        }
    }

    let object_names: Vec<&str> = objects.iter().map(|t| t.text).collect();
    let arrow_triples: Vec<(&str, &str, &str)> =
        arrows.iter().map(|(n, d, c, _)| (n.text, d.text, c.text)).collect();
    let mut table = SemigroupoidTable::new(&object_names, &arrow_triples).map_err(|e| {
        let (line, column) = locate_structure_error(&e, &objects, &arrows, seen["objects"]);
        ParseError::new(line, column, e.to_string())
    })?;

    let arrow = |tok: &Token, line: usize, table: &SemigroupoidTable| {
        table
            .arrow_by_name(tok.text)
            .ok_or_else(|| ParseError::new(line, tok.column, format!("unknown arrow `{}`", tok.text)))
    };
    for p in &products {
        let [s, t, u] = p.tokens;
        let (s_id, t_id, u_id) = (
            arrow(&s, p.line, &table)?,
            arrow(&t, p.line, &table)?,
            arrow(&u, p.line, &table)?,
        );
        if !table.composable(s_id, t_id) {
            return Err(ParseError::new(
                p.line,
                p.column,
                format!("`{} {}` is not a composable pair", s.text, t.text),
            ));
        }
        if table.mul(s_id, t_id).is_some() {
            return Err(ParseError::new(
                p.line,
                p.column,
                format!("repeated product `{} {}`", s.text, t.text),
            ));
        }
        table.set_mul(s_id, t_id, Some(u_id));
    }
    let missing: Vec<String> = table
        .composable_pairs()
        .filter(|&(s, t)| table.mul(s, t).is_none())
        .map(|(s, t)| format!("{} {}", table.arrow_name(s), table.arrow_name(t)))
        .collect();
    if !missing.is_empty() {
        let (line, column) = mul_header;
        return Err(ParseError::new(
            line,
            column,
            format!("missing products for composable pairs: {}", missing.join(", ")),
        ));
    }

    let mut declared_inverse = Vec::with_capacity(inverses.len());
    let mut declared_for = HashMap::new();
    for p in &inverses {
        let [s, t, _] = p.tokens;
        let pair = (arrow(&s, p.line, &table)?, arrow(&t, p.line, &table)?);
        if declared_for.insert(pair.0, p.line).is_some() {
            return Err(ParseError::new(
                p.line,
                p.column,
                format!("repeated inverse for `{}`", s.text),
            ));
        }
        declared_inverse.push(pair);
    }
    Ok(ParsedStructure {
        table,
        declared_inverse,
    })
}

fn locate_structure_error(
    e: &StructureError,
    objects: &[Token],
    arrows: &[(Token, Token, Token, usize)],
    objects_line: usize,
) -> (usize, usize) {
    match e {
        StructureError::DuplicateObject(name) => {
            // Objects may span several lines; report the header line.
            let column = objects.iter().filter(|t| t.text == name).nth(1).map_or(1, |t| t.column);
            (objects_line, column)
        }
        StructureError::DuplicateArrow(name) => arrows
            .iter()
            .filter(|a| a.0.text == name)
            .nth(1)
            .map_or((objects_line, 1), |a| (a.3, a.0.column)),
        StructureError::UnknownObject { arrow, object } => arrows
            .iter()
            .find(|a| a.0.text == arrow)
            .map_or((objects_line, 1), |a| {
                let tok = if a.1.text == object { a.1 } else { a.2 };
                (a.3, tok.column)
            }),
        _ => (objects_line, 1),
    }
}

/// Canonical text of a table; `inverse` adds an `[inverse]` section.
pub fn print_structure(table: &SemigroupoidTable, inverse: Option<&[(ArrowId, ArrowId)]>) -> String {
    let mut out = String::from("[objects]\n");
    let names: Vec<&str> = table.objects().map(|o| table.object_name(o)).collect();
    if !names.is_empty() {
        out.push_str(&names.join(" "));
        out.push('\n');
    }
    out.push_str("[arrows]\n");
    for s in table.arrows() {
        let _ = writeln!(
            out,
            "{} : {} -> {}",
            table.arrow_name(s),
            table.object_name(table.dom(s)),
            table.object_name(table.cod(s))
        );
    }
    out.push_str("[mul]\n");
    for (s, t) in table.composable_pairs() {
        if let Some(u) = table.mul(s, t) {
            let _ = writeln!(
                out,
                "{} {} = {}",
                table.arrow_name(s),
                table.arrow_name(t),
                table.arrow_name(u)
            );
        }
    }
    if let Some(pairs) = inverse {
        out.push_str("[inverse]\n");
        for &(s, t) in pairs {
            let _ = writeln!(out, "{} = {}", table.arrow_name(s), table.arrow_name(t));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::demo_table;

    #[test]
    fn demo_table_round_trips() {
        let table = demo_table();
        let text = print_structure(&table, None);
        let parsed = parse_structure(&text).unwrap();
        assert_eq!(parsed.table, table);
        assert!(parsed.declared_inverse.is_empty());
        assert_eq!(print_structure(&parsed.table, None), text);
    }

    #[test]
    fn loop_free_arrows_need_no_products() {
        let parsed = parse_structure("[objects]\nu v\n[arrows]\nf : u -> v\ng : v -> u\n[mul]\n");
        // f g and g f are composable, so this must fail.
        assert!(parsed.is_err());
        let parsed = parse_structure("[objects]\nu v w\n[arrows]\nf : u -> v\n[mul]\n").unwrap();
        assert_eq!(parsed.table.composable_pairs().count(), 0);
    }

    #[test]
    fn non_composable_product_is_positioned() {
        let text = "[objects]\nu v\n[arrows]\na : u -> v\n[mul]\n  a a = a\n";
        let err = parse_structure(text).unwrap_err();
        assert_eq!((err.line, err.column), (6, 3));
        assert!(err.message.contains("not a composable pair"));
    }

    #[test]
    fn malformed_lines() {
        let err = parse_structure("[objects]\nu\n[arrows]\na : u => u\n[mul]\na a = a\n").unwrap_err();
        assert_eq!((err.line, err.column), (4, 7));
        let err = parse_structure("[objects]\nu\n[arrows]\na : u -> w\n[mul]\n").unwrap_err();
        assert_eq!((err.line, err.column), (4, 10));
        let err = parse_structure("u\n").unwrap_err();
        assert_eq!(err.line, 1);
        let err = parse_structure("[objects]\nu\n[arrows]\na : u -> u\n[mul]\n").unwrap_err();
        assert!(err.message.contains("missing products"));
        let err = parse_structure("[objects]\nu\n[arrows]\na : u -> u\n[mul]\na a = a\na a = a\n")
            .unwrap_err();
        assert_eq!(err.line, 7);
        let err = parse_structure("[objects]\n[arrows]\n[wat]\n").unwrap_err();
        assert_eq!((err.line, err.column), (3, 2));
    }

    #[test]
    fn inverse_section() {
        let text = "[objects]\no\n[arrows]\ne : o -> o # idempotent\n[mul]\ne e = e\n[inverse]\ne = e\n";
        let parsed = parse_structure(text).unwrap();
        assert_eq!(parsed.declared_inverse, vec![(ArrowId(0), ArrowId(0))]);
        let printed = print_structure(&parsed.table, Some(&parsed.declared_inverse));
        assert_eq!(parse_structure(&printed).unwrap(), parsed);
    }
}
