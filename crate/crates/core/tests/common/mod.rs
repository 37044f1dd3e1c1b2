//! Naive reference implementations used as test oracles. They work from
//! names and raw tables only and share no code paths with the library's
//! scans beyond the accessors.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use isgd::{ArrowId, ElementId, PartialAction, SemigroupoidTable};

/// Every composable triple `(p, s, t)` on which `(ps)t != p(st)`, as names.
pub fn naive_assoc_failures(table: &SemigroupoidTable) -> BTreeSet<(String, String, String)> {
    let n = table.arrow_count() as u32;
    let mut out = BTreeSet::new();
    for p in 0..n {
        for s in 0..n {
            for t in 0..n {
                let (p, s, t) = (ArrowId(p), ArrowId(s), ArrowId(t));
                if table.dom(p) != table.cod(s) || table.dom(s) != table.cod(t) {
                    continue;
                }
                let left = table.mul(p, s).and_then(|ps| table.mul(ps, t));
                let right = table.mul(s, t).and_then(|st| table.mul(p, st));
                if left != right {
                    out.insert((
                        table.arrow_name(p).to_string(),
                        table.arrow_name(s).to_string(),
                        table.arrow_name(t).to_string(),
                    ));
                }
            }
        }
    }
    out
}

/// All `t` with `s t s = s` and `t s t = t`, by brute force.
pub fn naive_pseudo_inverses(table: &SemigroupoidTable, s: ArrowId) -> Vec<ArrowId> {
    let m = |a, b| table.mul(a, b);
    (0..table.arrow_count() as u32)
        .map(ArrowId)
        .filter(|&t| {
            m(s, t).and_then(|st| m(st, s)) == Some(s) && m(t, s).and_then(|ts| m(ts, t)) == Some(t)
        })
        .collect()
}

pub fn naive_inverse(table: &SemigroupoidTable, s: ArrowId) -> ArrowId {
    let inv = naive_pseudo_inverses(table, s);
    assert_eq!(inv.len(), 1, "arrow {} has {} pseudo-inverses", table.arrow_name(s), inv.len());
    inv[0]
}

pub type NamedSeed = (String, String);
pub type Partition = BTreeSet<BTreeSet<NamedSeed>>;

fn seed_name(act: &PartialAction, s: ArrowId, x: ElementId) -> NamedSeed {
    (act.structure().arrow_name(s).to_string(), act.element_name(x).to_string())
}

/// `D` computed straight from the definition.
pub fn naive_seeds(act: &PartialAction) -> Vec<(ArrowId, ElementId)> {
    let t = act.structure().table();
    let mut out = Vec::new();
    for s in t.arrows() {
        let ss = t.mul(naive_inverse(t, s), s).expect("s* s is composable");
        for &x in act.domain(ss) {
            out.push((s, x));
        }
    }
    out
}

fn naive_tilde(act: &PartialAction, (s, x): (ArrowId, ElementId), (t, y): (ArrowId, ElementId)) -> bool {
    let tab = act.structure().table();
    let idem = |e| tab.mul(e, e) == Some(e);
    if idem(s) && idem(t) && x == y {
        return true;
    }
    let t_inv = naive_inverse(tab, t);
    let Some(ts) = tab.mul(t_inv, s) else {
        return false;
    };
    let Some(st) = tab.mul(naive_inverse(tab, s), t) else {
        return false;
    };
    act.domain(st).contains(&x) && act.map(ts).get(&x) == Some(&y)
}

/// `D/≈` by Warshall's transitive closure of the symmetrized relation.
pub fn naive_partition(act: &PartialAction) -> Partition {
    let seeds = naive_seeds(act);
    let n = seeds.len();
    let mut r = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            r[i][j] = i == j || naive_tilde(act, seeds[i], seeds[j]) || naive_tilde(act, seeds[j], seeds[i]);
        }
    }
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                let row = r[k].clone();
                for (cell, reach) in r[i].iter_mut().zip(row) {
                    *cell |= reach;
                }
            }
        }
    }
    (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| r[i][j])
                .map(|j| seed_name(act, seeds[j].0, seeds[j].1))
                .collect()
        })
        .collect()
}

pub fn partition_of(glob: &isgd::Globalization) -> Partition {
    let q = glob.quotient();
    let act = glob.input();
    q.classes()
        .map(|c| q.members(c).into_iter().map(|s| seed_name(act, s.arrow, s.point)).collect())
        .collect()
}

/// Checks the S-function conditions of `h: A -> B` directly.
pub fn naive_is_s_function(a: &PartialAction, b: &PartialAction, h: &[ElementId]) -> bool {
    a.structure().arrows().all(|s| {
        a.domain(s).iter().all(|&x| b.domain(s).contains(&h[x.index()]))
            && a.map(s).iter().all(|(&x, &y)| b.map(s).get(&h[x.index()]) == Some(&h[y.index()]))
    })
}

/// Every S-function `h: A -> B` with `h ∘ f = g`, where `f: X -> A` and
/// `g: X -> B` are given as vectors, by odometer enumeration.
pub fn naive_commuting(
    a: &PartialAction,
    b: &PartialAction,
    f: &[ElementId],
    g: &[ElementId],
) -> (u64, Vec<Vec<ElementId>>) {
    let (na, nb) = (a.carrier_size(), b.carrier_size());
    let mut h = vec![ElementId(0); na];
    let mut found = Vec::new();
    let mut visited = 0u64;
    if nb == 0 {
        return (u64::from(na == 0), if na == 0 { vec![h] } else { vec![] });
    }
    loop {
        visited += 1;
        if f.iter().zip(g).all(|(fx, gx)| h[fx.index()] == *gx) && naive_is_s_function(a, b, &h) {
            found.push(h.clone());
        }
        let mut k = 0;
        loop {
            if k == na {
                return (visited, found);
            }
            h[k].0 += 1;
            if (h[k].0 as usize) < nb {
                break;
            }
            h[k].0 = 0;
            k += 1;
        }
    }
}

/// Named domains and maps, for comparing actions across carriers by name.
pub fn named_action(act: &PartialAction) -> BTreeMap<String, (BTreeSet<String>, BTreeMap<String, String>)> {
    let isg = act.structure();
    isg.arrows()
        .map(|s| {
            let d = act.domain(s).iter().map(|&x| act.element_name(x).to_string()).collect();
            let m = act
                .map(s)
                .iter()
                .map(|(&x, &y)| (act.element_name(x).to_string(), act.element_name(y).to_string()))
                .collect();
            (isg.arrow_name(s).to_string(), (d, m))
        })
        .collect()
}

pub fn seeds_named(list: &[(&str, &str)]) -> BTreeSet<NamedSeed> {
    list.iter().map(|(a, x)| (a.to_string(), x.to_string())).collect()
}

pub fn examples_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("examples")
}
