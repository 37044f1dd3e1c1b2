use std::fmt::Write;

use serde::Serialize;

use crate::exec::Execution;
use crate::globalize::{tilde_pairs, Globalization};

fn seed_list(glob: &Globalization, members: &[crate::globalize::Seed]) -> String {
    let act = glob.input();
    members
        .iter()
        .map(|s| s.display(act).to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Plain-text report: classes with their seeds, the families `E_s`, the
/// tables of `η_s` and the embedding `i`.
pub fn render_table(glob: &Globalization) -> String {
    let act = glob.input();
    let isg = act.structure();
    let q = glob.quotient();
    let mut out = String::new();
    let _ = writeln!(out, "seeds: {}", q.seeds().len());
    let _ = writeln!(out, "classes: {}", q.class_count());
    for c in q.classes() {
        let _ = writeln!(out, "  {} = {{{}}}", glob.class_label(c), seed_list(glob, &q.members(c)));
    }
    out.push_str("families:\n");
    for s in isg.arrows() {
        let labels: Vec<&str> = glob.family(s).iter().map(|&c| glob.class_label(c)).collect();
        let _ = writeln!(out, "  E_{} = {{{}}}", isg.arrow_name(s), labels.join(", "));
    }
    out.push_str("eta:\n");
    for s in isg.arrows() {
        let pairs: Vec<String> = glob
            .eta(s)
            .iter()
            .map(|(&a, &b)| format!("{}->{}", glob.class_label(a), glob.class_label(b)))
            .collect();
        let _ = writeln!(out, "  eta_{}: {}", isg.arrow_name(s), pairs.join(" "));
    }
    let i = glob.canonical_embedding();
    let pairs: Vec<String> = act
        .elements()
        .map(|x| format!("{}->{}", act.element_name(x), glob.class_label(i.apply(x))))
        .collect();
    let _ = writeln!(out, "i: {}", pairs.join(" "));
    out
}

fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz: the underlying graph of the semigroupoid, then the seeds
/// clustered by class with an undirected edge for every `∼` pair.
pub fn render_dot(glob: &Globalization) -> String {
    let act = glob.input();
    let isg = act.structure();
    let q = glob.quotient();
    let mut out = String::from("digraph globalization {\n");
    out.push_str("  subgraph cluster_structure {\n    label=\"structure\";\n");
    for o in isg.objects() {
        let _ = writeln!(out, "    {};", dot_id(&format!("obj:{}", isg.object_name(o))));
    }
    for s in isg.arrows() {
        let _ = writeln!(
            out,
            "    {} -> {} [label={}];",
            dot_id(&format!("obj:{}", isg.object_name(isg.dom(s)))),
            dot_id(&format!("obj:{}", isg.object_name(isg.cod(s)))),
            dot_id(isg.arrow_name(s))
        );
    }
    out.push_str("  }\n");
    let seed_node = |i: usize| dot_id(&format!("seed:{}", q.seeds()[i].display(act)));
    for c in q.classes() {
        let _ = writeln!(
            out,
            "  subgraph cluster_{} {{\n    label={};",
            c.0 + 1,
            dot_id(glob.class_label(c))
        );
        for seed in q.members(c) {
            let idx = q.seeds().binary_search(&seed).expect("member of D");
            let _ = writeln!(out, "    {} [label={}];", seed_node(idx), dot_id(&seed.display(act).to_string()));
        }
        out.push_str("  }\n");
    }
    for (a, b) in tilde_pairs(act, q.seeds(), Execution::Sequential) {
        let _ = writeln!(out, "  {} -> {} [dir=none];", seed_node(a), seed_node(b));
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassJson {
    pub label: String,
    /// `[arrow, point]` pairs.
    pub members: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyJson {
    pub arrow: String,
    pub classes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MapJson {
    pub arrow: String,
    pub pairs: Vec<[String; 2]>,
}

/// Schema of `globalize --format json`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GlobalizationJson {
    pub seed_count: usize,
    pub classes: Vec<ClassJson>,
    pub families: Vec<FamilyJson>,
    pub maps: Vec<MapJson>,
    /// `i` as `[point, class]` pairs.
    pub embedding: Vec<[String; 2]>,
}

impl GlobalizationJson {
    pub fn new(glob: &Globalization) -> Self {
        let act = glob.input();
        let isg = act.structure();
        let q = glob.quotient();
        let label = |c| glob.class_label(c).to_string();
        Self {
            seed_count: q.seeds().len(),
            classes: q
                .classes()
                .map(|c| ClassJson {
                    label: label(c),
                    members: q
                        .members(c)
                        .into_iter()
                        .map(|s| [isg.arrow_name(s.arrow).to_string(), act.element_name(s.point).to_string()])
                        .collect(),
                })
                .collect(),
            families: isg
                .arrows()
                .map(|s| FamilyJson {
                    arrow: isg.arrow_name(s).to_string(),
                    classes: glob.family(s).iter().map(|&c| label(c)).collect(),
                })
                .collect(),
            maps: isg
                .arrows()
                .map(|s| MapJson {
                    arrow: isg.arrow_name(s).to_string(),
                    pairs: glob.eta(s).iter().map(|(&a, &b)| [label(a), label(b)]).collect(),
                })
                .collect(),
            embedding: act
                .elements()
                .map(|x| [act.element_name(x).to_string(), label(glob.canonical_embedding().apply(x))])
                .collect(),
        }
    }
}

pub fn render_json(glob: &Globalization) -> String {
    let mut text = serde_json::to_string_pretty(&GlobalizationJson::new(glob)).expect("plain data serializes");
    text.push('\n');
    text
}
