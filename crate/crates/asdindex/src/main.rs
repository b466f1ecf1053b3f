//! Command-line front end: classify group actions, evaluate the orbifold
//! index formula, print the invariant tables, and re-check the consistency
//! identities.
//!
//! Exit codes: 0 success, 1 parse/range error, 2 unsupported group,
//! 3 spec validation failure, 4 verification failure.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use asdindex::catalog::{
    hyperkahler_compactified_index, hyperkahler_entry, hyperkahler_h1_dim, hyperkahler_table,
    lebrun_h1_dim, lebrun_index, lebrun_metric_data, lebrun_moduli_bound, ModuliBound,
};
use asdindex::conjclass::classify_action;
use asdindex::indexcore::{ale_index_relation, orbifold_index, verify_pairing_identity};
use asdindex::input::{parse_generator_file, parse_orbifold_spec};
use asdindex::invariants::OrbifoldSpec;
use asdindex::quat::ade_standard_action;
use asdindex::{Error, Family, Orientation, SingularityDescriptor};

#[derive(Parser)]
#[command(
    name = "asdindex",
    version,
    about = "Index of the anti-self-dual deformation complex on ADE orbifolds",
    long_about = "Classifies finite fixed-point-free SO(4) actions into ADE type and \
                  conjugacy orientation, evaluates the orbifold index formula \
                  (15 chi + 29 tau)/2 + sum of correction terms, and reproduces the \
                  invariant tables with built-in consistency checks.\n\n\
                  Floating generator input is reconstructed at tolerance 1e-6.\n\
                  Set ASDINDEX_WIDTH to adjust text wrapping (default 100)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a group action file into ADE type and orientation
    Classify {
        /// JSON file with {"generators": [{"left": [4], "right": [4]}]} or
        /// {"matrices": [[16 reals, row-major]]}
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Evaluate the orbifold index formula for a spec file
    Index {
        /// JSON file with {"euler", "signature", "singularities": [...]}
        file: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Print the hyperkahler and LeBrun invariant tables
    Tables {
        #[arg(long, default_value_t = 1)]
        n_min: u32,
        #[arg(long, default_value_t = 8)]
        n_max: u32,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Re-check the pairing identity and the two index computation routes
    Verify {
        #[arg(long, default_value_t = 1)]
        n_min: u32,
        #[arg(long, default_value_t = 50)]
        n_max: u32,
        /// Self-test hook: flip one correction term and confirm detection
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// LeBrun negative-mass metric data on O(-n)
    Lebrun {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

#[derive(Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Classify { file, format } => cmd_classify(&file, format),
        Command::Index { file, format } => cmd_index(&file, format),
        Command::Tables {
            n_min,
            n_max,
            format,
        } => cmd_tables(n_min, n_max, format),
        Command::Verify {
            n_min,
            n_max,
            inject_fault,
        } => cmd_verify(n_min, n_max, inject_fault),
        Command::Lebrun { n, format } => cmd_lebrun(n, format),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("asdindex: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::BadRange(_) | Error::DegenerateQuaternion(_) => 1,
        Error::Unsupported(_)
        | Error::MixedDeterminant
        | Error::NotFinite { .. }
        | Error::NonOrthogonal { .. }
        | Error::NonFreeGroup
        | Error::NotCyclic { .. }
        | Error::AngleReconstruction { .. }
        | Error::NonIntegralAverage { .. } => 2,
        Error::InvalidDescriptor { .. }
        | Error::GroupTooLarge { .. }
        | Error::ParityViolation { .. }
        | Error::EtaRequired { .. } => 3,
        Error::RouteDisagreement(_) => 4,
    }
}

fn output_width() -> usize {
    std::env::var("ASDINDEX_WIDTH")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .map_or(100, |w| w.max(20))
}

/// Greedy word wrap; `indent` prefixes continuation lines.
fn wrap(text: &str, width: usize, indent: &str) -> String {
    let mut lines: Vec<String> = Vec::new();
    let mut line = String::new();
    for word in text.split_whitespace() {
        if !line.is_empty() && line.len() + 1 + word.len() > width {
            lines.push(std::mem::take(&mut line));
            line = indent.to_string();
        }
        if !line.is_empty() && !line.ends_with(char::is_whitespace) {
            line.push(' ');
        }
        line.push_str(word);
    }
    if !line.is_empty() {
        lines.push(line);
    }
    lines.join("\n")
}

fn read_file(path: &PathBuf) -> Result<Vec<u8>, Error> {
    fs::read(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn cmd_classify(file: &PathBuf, format: Format) -> Result<u8, Error> {
    let bytes = read_file(file)?;
    let group = parse_generator_file(&bytes)?;
    if group.order() == 1 {
        match format {
            Format::Text => println!("trivial group (order 1): smooth point, no orbifold data"),
            Format::Json => println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::json!({
                    "family": "trivial",
                    "n": null,
                    "orientations": [],
                    "aliases": [],
                }))
                .expect("serializable")
            ),
        }
        return Ok(2);
    }
    let classification = classify_action(&group)?;
    match format {
        Format::Text => {
            println!("order: {}", group.order());
            println!("classification: {}", classification.label());
            let orientations: Vec<&str> = classification
                .orientations()
                .iter()
                .map(|o| o.as_str())
                .collect();
            println!(
                "orientations: {}",
                if orientations.is_empty() {
                    "-".to_string()
                } else {
                    orientations.join(", ")
                }
            );
            println!(
                "aliases: {}",
                if classification.aliases().is_empty() {
                    "-".to_string()
                } else {
                    classification.aliases().join(", ")
                }
            );
        }
        Format::Json => {
            println!(
                "{}",
                serde_json::to_string_pretty(&classification).expect("serializable")
            )
        }
    }
    Ok(if classification.is_ade() { 0 } else { 2 })
}

fn cmd_index(file: &PathBuf, format: Format) -> Result<u8, Error> {
    let bytes = read_file(file)?;
    let spec = parse_orbifold_spec(&bytes)?;
    let report = orbifold_index(&spec)?;
    match format {
        Format::Text => {
            if let Some(name) = spec.name() {
                println!("orbifold: {name}");
            }
            println!(
                "smooth part (15*{} + 29*{})/2: {}",
                spec.euler(),
                spec.signature(),
                report.smooth_part()
            );
            for c in report.corrections() {
                println!("correction {}: {:+}", c.singularity, c.n);
            }
            println!("total index: {}", report.total());
            let width = output_width();
            for note in report.notes() {
                println!("{}", wrap(&format!("note: {note}"), width, "  "));
            }
        }
        Format::Json => {
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("serializable")
            )
        }
    }
    Ok(0)
}

fn check_range(n_min: u32, n_max: u32) -> Result<(), Error> {
    if n_min < 1 || n_min > n_max || n_max > 200 {
        return Err(Error::BadRange(format!(
            "need 1 <= n-min <= n-max <= 200, got {n_min}..{n_max}"
        )));
    }
    Ok(())
}

fn moduli_label(bound: &ModuliBound) -> String {
    match bound {
        ModuliBound::Rigid => "rigid".to_string(),
        ModuliBound::Unknown => "unknown".to_string(),
        ModuliBound::LowerBound(k) => format!(">= {k}"),
    }
}

fn cmd_tables(n_min: u32, n_max: u32, format: Format) -> Result<u8, Error> {
    check_range(n_min, n_max)?;
    let rows = hyperkahler_table(n_min, n_max)?;

    #[derive(serde::Serialize)]
    struct TableRow {
        r#type: String,
        order: u64,
        b2_minus: u32,
        euler: i64,
        index_compactified: i64,
        h1_dim: u64,
    }

    let mut json_rows = Vec::with_capacity(rows.len());
    for entry in &rows {
        json_rows.push(TableRow {
            r#type: entry.label(),
            order: entry.group_order,
            b2_minus: entry.b2_minus,
            euler: entry.euler_ale,
            index_compactified: hyperkahler_compactified_index(entry)?,
            h1_dim: hyperkahler_h1_dim(entry),
        });
    }

    if format == Format::Json {
        println!(
            "{}",
            serde_json::to_string_pretty(&json_rows).expect("serializable")
        );
        return Ok(0);
    }

    println!("Hyperkahler ALE spaces (n = {n_min}..{n_max})");
    println!();
    println!(
        "  {:<6} {:>6} {:>5} {:>5} {:>8} {:>8}",
        "type", "|G|", "b2-", "chi", "ind(X^)", "dim H1"
    );
    for row in &json_rows {
        println!(
            "  {:<6} {:>6} {:>5} {:>5} {:>8} {:>8}",
            row.r#type, row.order, row.b2_minus, row.euler, row.index_compactified, row.h1_dim
        );
    }
    println!();
    println!("LeBrun metrics on O(-n) (n = {n_min}..{n_max})");
    println!();
    println!(
        "  {:>4} {:>4} {:>4} {:>10} {:>8} {:>12}",
        "n", "A", "B", "mass/pi^2", "ind(X^)", "moduli dim"
    );
    for n in n_min..=n_max {
        let data = lebrun_metric_data(n)?;
        let index = if n >= 2 {
            lebrun_index(n)?.to_string()
        } else {
            "-".to_string()
        };
        let bound = moduli_label(&lebrun_moduli_bound(n)?);
        println!(
            "  {:>4} {:>4} {:>4} {:>10} {:>8} {:>12}",
            n,
            data.coeff_a,
            data.coeff_b,
            -4 * (i64::from(n) - 2),
            index,
            bound
        );
    }
    Ok(0)
}

fn sweep(n_min: u32, n_max: u32) -> Vec<(Family, u32)> {
    let mut classes = Vec::new();
    for n in n_min.max(1)..=n_max {
        classes.push((Family::A, n));
    }
    for n in n_min.max(3)..=n_max {
        classes.push((Family::D, n));
    }
    for n in 6..=8 {
        if n_min <= n && n <= n_max {
            classes.push((Family::E, n));
        }
    }
    classes
}

fn cmd_verify(n_min: u32, n_max: u32, inject_fault: bool) -> Result<u8, Error> {
    check_range(n_min, n_max)?;
    let classes = sweep(n_min, n_max);
    let width = output_width();
    let mut failures = 0usize;

    for (i, &(family, n)) in classes.iter().enumerate() {
        let label = format!("{family}_{n}");

        let mut witness = verify_pairing_identity(family, n)?;
        if inject_fault && i == 0 {
            // Deliberately corrupt one correction term; the identity must
            // catch it.
            witness.reversing_term += 1;
            witness.holds = witness.killing_dim_s4 as i64 == witness.expected();
        }
        if !witness.holds {
            failures += 1;
            println!(
                "{}",
                wrap(
                    &format!(
                        "FAIL pairing identity at {label}: dim H0(S^4/G) = {} but 15 + N(reversing) + N(preserving) = 15 + ({}) + ({}) = {}",
                        witness.killing_dim_s4,
                        witness.reversing_term,
                        witness.preserving_term,
                        witness.expected()
                    ),
                    width,
                    "  "
                )
            );
        }

        let entry = hyperkahler_entry(family, n)?;
        let reversed = SingularityDescriptor::new(family, n, Orientation::Reversing)?;
        let spec = OrbifoldSpec::new(
            None,
            entry.euler_compactified,
            entry.signature_compactified,
            vec![reversed],
        )?;
        let via_orbifold = orbifold_index(&spec)?.total();
        let standard = SingularityDescriptor::new(family, n, Orientation::Preserving)?;
        let group = ade_standard_action(&standard)?;
        let via_ale = ale_index_relation(hyperkahler_h1_dim(&entry), 0, &group)?;
        if via_orbifold != via_ale {
            failures += 1;
            println!(
                "{}",
                wrap(
                    &format!(
                        "FAIL index route agreement at {label}: orbifold formula gives {via_orbifold}, ALE dimension count gives {via_ale}"
                    ),
                    width,
                    "  "
                )
            );
        }
    }

    let span = {
        let mut parts = Vec::new();
        if n_min.max(1) <= n_max {
            parts.push(format!("A_{}..A_{n_max}", n_min.max(1)));
        }
        if n_min.max(3) <= n_max {
            parts.push(format!("D_{}..D_{n_max}", n_min.max(3)));
        }
        if n_min <= 8 && n_max >= 6 {
            parts.push(format!("E_{}..E_{}", n_min.max(6), n_max.min(8)));
        }
        parts.join(", ")
    };
    println!("checked {} classes ({span})", classes.len());
    if failures == 0 {
        println!("pairing identity and index route agreement: all hold");
        Ok(0)
    } else {
        println!("{failures} identity check(s) failed");
        Ok(4)
    }
}

fn cmd_lebrun(n: u32, format: Format) -> Result<u8, Error> {
    let data = lebrun_metric_data(n)?;
    let index = if n >= 2 { Some(lebrun_index(n)?) } else { None };
    let h1 = if n >= 2 {
        Some(lebrun_h1_dim(n)?)
    } else {
        None
    };
    let bound = lebrun_moduli_bound(n)?;
    match format {
        Format::Text => {
            println!("LeBrun metric on O(-{n})");
            println!(
                "profile coefficients: A = {}, B = {}",
                data.coeff_a, data.coeff_b
            );
            println!("mass: -4 pi^2 * ({}) = {}", i64::from(n) - 2, data.mass);
            println!(
                "compactified topology: chi = {}, tau = {}",
                data.euler_compactified, data.signature_compactified
            );
            match &data.group {
                Some(g) => println!("orbifold point: {g}"),
                None => println!("orbifold point: none (smooth compactification)"),
            }
            match index {
                Some(ind) => println!("index: {ind}"),
                None => println!("index: - (orbifold formula needs n >= 2)"),
            }
            if let Some(h1) = h1 {
                println!("dim H1: {h1}");
            }
            println!("moduli: {}", moduli_label(&bound));
        }
        Format::Json => {
            let json = serde_json::json!({
                "n": n,
                "coeff_a": data.coeff_a,
                "coeff_b": data.coeff_b,
                "mass": data.mass,
                "euler_compactified": data.euler_compactified,
                "signature_compactified": data.signature_compactified,
                "group": data.group,
                "index": index,
                "h1_dim": h1,
                "moduli": bound,
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&json).expect("serializable")
            );
        }
    }
    Ok(0)
}
