use std::ffi::OsString;
use std::fmt::Display;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use crate::action::{
    check_derived_propositions, global_diagnostic, restrict, validate_e_axioms, validate_p_axioms, CoverageMode,
    ElementId, ElementSet, PartialAction,
};
use crate::algebra::{check_inverse_laws, infer_inverses_checked, validate_semigroupoid, InverseSemigroupoid};
use crate::generators::{catalog, random_partial_action, CatalogEntry};
use crate::globalize::{
    build_globalization, check_fiber_injectivity, mediating, verify_universal, DEFAULT_EXHAUSTIVE_BOUND,
};
use crate::io::{action_header, parse_action, parse_structure, print_action, print_structure, render_dot, render_json, render_table};
use crate::morphism::{is_s_function, GlobalizationTriple, SFunction};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "isgd", version, about = "Partial actions of finite inverse semigroupoids and their globalizations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Table,
    Dot,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate structure (.isgd) and action (.pact) files.
    Validate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Restrict an action to a subset of its carrier and print the result.
    Restrict {
        action: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        subset: Vec<String>,
        /// Drop uncovered points instead of failing.
        #[arg(long)]
        trim: bool,
    },
    /// Build the universal globalization of a partial action.
    Globalize {
        action: PathBuf,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Compute the mediating map toward a global target.
    Mediate {
        action: PathBuf,
        #[arg(long)]
        target: PathBuf,
        /// Comma-separated `x->y` pairs.
        #[arg(long)]
        embedding: String,
        /// Require the embedding to be a globalization.
        #[arg(long)]
        strict: bool,
        /// Largest candidate count for the exhaustive uniqueness check.
        #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_BOUND)]
        bound: u64,
    },
    /// Validate an action under both axiom systems.
    Check {
        action: PathBuf,
        /// Also check the derived propositions.
        #[arg(long)]
        props: bool,
    },
    /// List the built-in catalog, optionally writing it out as files.
    Catalog {
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Print a seeded random restriction of a catalog action.
    Sample {
        entry: String,
        /// Index among the entry's global actions.
        #[arg(long, default_value_t = 0)]
        action: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Path written in the `structure =` header.
        #[arg(long)]
        structure_path: Option<String>,
    },
}

/// Failure of a subcommand, mapped to an exit code.
enum Failure {
    Input(String),
    Invalid,
}

impl<E: Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_structure(path: &Path) -> Result<Arc<InverseSemigroupoid>, Failure> {
    let text = read(path)?;
    let parsed = parse_structure(&text).map_err(|e| Failure::Input(format!("{}:{e}", path.display())))?;
    infer_inverses_checked(parsed.table, &parsed.declared_inverse)
        .map(Arc::new)
        .map_err(|e| Failure::Input(format!("{}: not an inverse semigroupoid: {e}", path.display())))
}

fn load_action(path: &Path) -> Result<PartialAction, Failure> {
    let text = read(path)?;
    let located = |e: crate::io::ParseError| Failure::Input(format!("{}:{e}", path.display()));
    let header = action_header(&text).map_err(located)?;
    let Some(rel) = header else {
        return Err(Failure::Input(format!("{}: missing `structure = <path>` header", path.display())));
    };
    let structure = load_structure(&path.parent().unwrap_or(Path::new(".")).join(rel))?;
    parse_action(&text, structure).map_err(located)
}

fn report_line(out: &mut dyn Write, label: impl Display, report: &crate::report::ValidationReport) -> std::io::Result<()> {
    writeln!(out, "{label}: {}", report.to_string().trim_end())
}

fn validate(files: &[PathBuf], out: &mut dyn Write) -> Outcome {
    let mut all_ok = true;
    for path in files {
        let text = read(path)?;
        let name = path.display();
        if path.extension().is_some_and(|e| e == "isgd") {
            let parsed = parse_structure(&text).map_err(|e| Failure::Input(format!("{name}:{e}")))?;
            let report = validate_semigroupoid(&parsed.table);
            report_line(out, format_args!("{name} [semigroupoid]"), &report)?;
            all_ok &= report.ok();
            if !report.ok() {
                continue;
            }
            match infer_inverses_checked(parsed.table, &parsed.declared_inverse) {
                Ok(isg) => {
                    let laws = check_inverse_laws(&isg);
                    report_line(out, format_args!("{name} [inverse]"), &laws)?;
                    let idem: Vec<&str> = isg.idempotents().into_iter().map(|e| isg.arrow_name(e)).collect();
                    writeln!(out, "{name}: idempotents {{{}}}", idem.join(", "))?;
                    all_ok &= laws.ok();
                }
                Err(e) => {
                    writeln!(out, "{name} [inverse]: FAILED ({e})")?;
                    all_ok = false;
                }
            }
        } else {
            let act = load_action(path)?;
            let p = validate_p_axioms(&act);
            let e = validate_e_axioms(&act);
            report_line(out, format_args!("{name} [P]"), &p)?;
            report_line(out, format_args!("{name} [E]"), &e)?;
            all_ok &= p.ok() && e.ok();
        }
    }
    if all_ok {
        Ok(())
    } else {
        Err(Failure::Invalid)
    }
}

fn check(path: &Path, props: bool, out: &mut dyn Write) -> Outcome {
    let act = load_action(path)?;
    let p = validate_p_axioms(&act);
    let e = validate_e_axioms(&act);
    report_line(out, "P axioms", &p)?;
    report_line(out, "E axioms", &e)?;
    let agree = p.ok() == e.ok();
    writeln!(out, "P/E agreement: {}", if agree { "ok" } else { "MISMATCH" })?;
    let mut ok = p.ok() && e.ok() && agree;
    if p.ok() {
        let g = global_diagnostic(&act);
        writeln!(
            out,
            "global: {} (domains saturated: {}, composition exact: {})",
            g.domains_saturated && g.composition_exact,
            g.domains_saturated,
            g.composition_exact
        )?;
        ok &= g.agree();
    }
    if props {
        let d = check_derived_propositions(&act);
        report_line(out, "derived propositions", &d)?;
        ok &= d.ok();
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Invalid)
    }
}

fn restrict_cmd(path: &Path, subset: &[String], trim: bool, out: &mut dyn Write) -> Outcome {
    let text = read(path)?;
    let act = load_action(path)?;
    let report = validate_p_axioms(&act);
    if !report.ok() {
        report_line(out, path.display(), &report)?;
        return Err(Failure::Invalid);
    }
    let set: ElementSet = subset
        .iter()
        .map(|n| {
            act.element_by_name(n)
                .ok_or_else(|| Failure::Input(format!("unknown element `{n}`")))
        })
        .collect::<Result<_, _>>()?;
    let mode = if trim { CoverageMode::Trim } else { CoverageMode::Strict };
    let restricted = restrict(&act, &set, mode)?;
    let header = action_header(&text)?;
    write!(out, "{}", print_action(&restricted, header.as_deref()))?;
    Ok(())
}

fn globalize_cmd(path: &Path, format: Format, out: &mut dyn Write) -> Outcome {
    let act = load_action(path)?;
    let glob = match build_globalization(&act) {
        Ok(g) => g,
        Err(crate::globalize::GlobalizeError::InvalidInput(r)) => {
            report_line(out, path.display(), &r)?;
            return Err(Failure::Invalid);
        }
        Err(e) => return Err(e.into()),
    };
    let text = match format {
        Format::Table => render_table(&glob),
        Format::Dot => render_dot(&glob),
        Format::Json => render_json(&glob),
    };
    write!(out, "{text}")?;
    Ok(())
}

fn parse_pairs(spec: &str) -> Result<Vec<(String, String)>, Failure> {
    spec.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.trim()
                .split_once("->")
                .map(|(x, y)| (x.trim().to_string(), y.trim().to_string()))
                .ok_or_else(|| Failure::Input(format!("expected `x->y`, found `{p}`")))
        })
        .collect()
}

fn mediate_cmd(path: &Path, target: &Path, embedding: &str, strict: bool, bound: u64, out: &mut dyn Write) -> Outcome {
    let act = load_action(path)?;
    let tgt = load_action(target)?;
    let pairs = parse_pairs(embedding)?;
    let pair_refs: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let j = SFunction::from_pairs(act.clone(), tgt, &pair_refs)?;
    let triple = if strict {
        GlobalizationTriple::new(j)
    } else {
        GlobalizationTriple::global_target(j)
    };
    let triple = match triple {
        Ok(t) => t,
        Err(r) => {
            report_line(out, "target", &r)?;
            return Err(Failure::Invalid);
        }
    };
    let glob = match build_globalization(&act) {
        Ok(g) => g,
        Err(crate::globalize::GlobalizeError::InvalidInput(r)) => {
            report_line(out, path.display(), &r)?;
            return Err(Failure::Invalid);
        }
        Err(e) => return Err(e.into()),
    };
    let sigma = mediating(&glob, &triple)?;
    let named: Vec<String> = sigma
        .map()
        .iter()
        .enumerate()
        .map(|(c, &y)| {
            format!(
                "{}->{}",
                glob.class_label(ElementId(c as u32)),
                sigma.target().element_name(y)
            )
        })
        .collect();
    writeln!(out, "sigma: {}", named.join(" "))?;
    writeln!(out, "injective: {}", sigma.is_injective())?;
    let s_fn = is_s_function(&sigma);
    report_line(out, "S-function", &s_fn)?;
    let fibers = check_fiber_injectivity(&sigma, &glob);
    report_line(out, "fiber injectivity", &fibers)?;
    let universal = verify_universal(&glob, &triple, &sigma, bound);
    report_line(out, "universal property", &universal)?;
    if s_fn.ok() && fibers.ok() && universal.ok() {
        Ok(())
    } else {
        Err(Failure::Invalid)
    }
}

fn entry_summary(entry: &CatalogEntry) -> String {
    let s = &entry.structure;
    let actions: Vec<String> = entry
        .actions
        .iter()
        .map(|a| format!("{}({}{})", a.label, a.action.carrier_size(), if a.global { ", global" } else { "" }))
        .collect();
    format!(
        "{}: {} objects, {} arrows, {} idempotents; actions: {}",
        entry.name,
        s.object_count(),
        s.arrow_count(),
        s.idempotents().len(),
        actions.join(" ")
    )
}

fn catalog_cmd(dump: Option<&Path>, out: &mut dyn Write) -> Outcome {
    for entry in catalog() {
        writeln!(out, "{}", entry_summary(&entry))?;
        if let Some(dir) = dump {
            std::fs::create_dir_all(dir)?;
            let structure_file = format!("{}.isgd", entry.name);
            std::fs::write(dir.join(&structure_file), print_structure(entry.structure.table(), None))?;
            for a in &entry.actions {
                std::fs::write(
                    dir.join(format!("{}-{}.pact", entry.name, a.label)),
                    print_action(&a.action, Some(&structure_file)),
                )?;
            }
        }
    }
    Ok(())
}

fn sample_cmd(name: &str, action: usize, seed: u64, structure_path: Option<&str>, out: &mut dyn Write) -> Outcome {
    let entries = catalog();
    let entry = entries
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Failure::Input(format!("no catalog entry `{name}`")))?;
    let count = entry.global_actions().count();
    if action >= count {
        return Err(Failure::Input(format!("`{name}` has {count} global action(s)")));
    }
    let act = random_partial_action(entry, action, seed);
    let default_path = format!("{name}.isgd");
    write!(out, "{}", print_action(&act, Some(structure_path.unwrap_or(&default_path))))?;
    Ok(())
}

/// Runs the command line `args` (including the program name), writing results
/// to `out` and diagnostics to `err`. Returns the process exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{rendered}") } else { write!(out, "{rendered}") };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Validate { files } => validate(files, out),
        Command::Restrict { action, subset, trim } => restrict_cmd(action, subset, *trim, out),
        Command::Globalize { action, format } => globalize_cmd(action, *format, out),
        Command::Mediate {
            action,
            target,
            embedding,
            strict,
            bound,
        } => mediate_cmd(action, target, embedding, *strict, *bound, out),
        Command::Check { action, props } => check(action, *props, out),
        Command::Catalog { dump } => catalog_cmd(dump.as_deref(), out),
        Command::Sample {
            entry,
            action,
            seed,
            structure_path,
        } => sample_cmd(entry, *action, *seed, structure_path.as_deref(), out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Invalid) => EXIT_INVALID,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}
