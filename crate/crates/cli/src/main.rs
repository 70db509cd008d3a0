//! Command-line verifier and calculator for the eislat library.
//!
//! Exit codes: 0 on success, 1 when a verification check fails, 2 on usage or
//! input errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use eislat::checks::{check_description, run_check, CheckOptions, CheckReport, CHECK_IDS};
use eislat::constructions::{self, named_lattice, stabilizer_class_lattice, NAMED_LATTICES};
use eislat::groups::{full_aut_definite, weyl_group, MatrixGroup};
use eislat::lattice::HermitianLattice;
use eislat::linalg::{snf, EMatrix};
use eislat::modular::{classify_lambda, classify_tau_elliptic, j_invariant, UpperHalfPoint};

#[derive(Parser)]
#[command(
    name = "eislat",
    version,
    about = "Exact Hermitian-lattice computations over the Eisenstein integers",
    after_help = "Lattice arguments accept a JSON file path or one of the built-in names: \
                  @lambda, @d3, @h, @L0, @M0."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification checks (C1..C15)
    Verify {
        /// Run only the named checks; repeatable
        #[arg(long = "check", value_name = "ID")]
        checks: Vec<String>,
        /// Emit the report as a JSON array
        #[arg(long)]
        json: bool,
        /// Group-closure element cap override
        #[arg(long, value_name = "N")]
        cap: Option<usize>,
        /// Generic grid size for the cross-side comparison
        #[arg(long, value_name = "N")]
        grid: Option<usize>,
    },
    /// Smith normal form of a matrix (JSON file)
    Snf {
        matrix: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Discriminant group of a lattice
    DiscGroup {
        lattice: String,
        #[arg(long)]
        json: bool,
    },
    /// All vectors of one norm in a positive definite lattice
    ShortVectors {
        lattice: String,
        #[arg(long, value_name = "N")]
        norm: i64,
        #[arg(long)]
        json: bool,
    },
    /// Full automorphism group of a positive definite lattice
    Aut {
        lattice: String,
        /// Dump all group elements
        #[arg(long)]
        elements: bool,
        #[arg(long)]
        json: bool,
    },
    /// Weyl group: closure of the norm-2 reflections
    Weyl {
        lattice: String,
        /// Dump all group elements
        #[arg(long)]
        elements: bool,
        /// Group-closure element cap override
        #[arg(long, value_name = "N")]
        cap: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Classify tau through the elliptic-curve j-invariant
    #[command(allow_negative_numbers = true)]
    ClassifyTau {
        re: f64,
        im: f64,
        #[arg(long)]
        json: bool,
    },
    /// Classify a Hesse-pencil parameter lambda
    #[command(allow_negative_numbers = true)]
    ClassifyLambda {
        re: f64,
        im: f64,
        #[arg(long)]
        json: bool,
    },
    /// The period point j0(tau): coordinates, norm, and stabilizer class
    #[command(allow_negative_numbers = true)]
    Period {
        re: f64,
        im: f64,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    // die quietly when the consumer of a pipe goes away (e.g. `| head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_lattice(arg: &str) -> Result<HermitianLattice, String> {
    if arg.starts_with('@') {
        return named_lattice(arg).ok_or_else(|| {
            format!(
                "unknown built-in lattice {arg}; valid names: {}",
                NAMED_LATTICES.join(", ")
            )
        });
    }
    let text = std::fs::read_to_string(arg).map_err(|e| format!("cannot read {arg}: {e}"))?;
    serde_json::from_str(&text).map_err(|e| format!("invalid lattice JSON in {arg}: {e}"))
}

fn vector_str(v: &[eislat::EisensteinInt]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn print_check_line(r: &CheckReport) {
    println!(
        "{:4} {}  {} ({} ms)",
        r.check,
        if r.passed() { "pass" } else { "FAIL" },
        check_description(&r.check),
        r.ms
    );
    if !r.passed() {
        println!("      detail: {}", r.detail);
    }
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Verify {
            checks,
            json,
            cap,
            grid,
        } => {
            let opts = CheckOptions { cap, grid };
            let ids: Vec<String> = if checks.is_empty() {
                CHECK_IDS.iter().map(|s| s.to_string()).collect()
            } else {
                checks
            };
            let mut reports = Vec::with_capacity(ids.len());
            for id in &ids {
                let report = run_check(id, &opts).map_err(|e| e.to_string())?;
                if !json {
                    print_check_line(&report);
                }
                reports.push(report);
            }
            if json {
                println!("{}", serde_json::to_string_pretty(&reports).unwrap());
            }
            let all_pass = reports.iter().all(|r| r.passed());
            if !json {
                println!(
                    "{} of {} checks passed",
                    reports.iter().filter(|r| r.passed()).count(),
                    reports.len()
                );
            }
            Ok(if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Snf { matrix, json } => {
            let text = std::fs::read_to_string(&matrix)
                .map_err(|e| format!("cannot read {}: {e}", matrix.display()))?;
            let m: EMatrix =
                serde_json::from_str(&text).map_err(|e| format!("invalid matrix JSON: {e}"))?;
            let s = snf(&m);
            if json {
                println!("{}", serde_json::to_string_pretty(&s).unwrap());
            } else {
                let factors: Vec<String> = s
                    .invariant_factors()
                    .iter()
                    .map(|f| f.to_string())
                    .collect();
                println!("invariant factors: ({})", factors.join(", "));
                println!("d =\n{}", s.d);
                println!("u =\n{}", s.u);
                println!("v =\n{}", s.v);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::DiscGroup { lattice, json } => {
            let l = load_lattice(&lattice)?;
            let dg = l.discriminant_group().map_err(|e| e.to_string())?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "lattice": l,
                        "invariant_factors": dg.invariant_factors(),
                        "order": dg.order().to_string(),
                        "form": dg.space.form(),
                    }))
                    .unwrap()
                );
            } else {
                let factors: Vec<String> = dg
                    .invariant_factors()
                    .iter()
                    .map(|f| f.to_string())
                    .collect();
                println!("invariant factors: ({})", factors.join(", "));
                println!("order: {}", dg.order());
                if !dg.space.is_trivial() {
                    println!("torsion form on the generators:\n{}", dg.space.form());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::ShortVectors {
            lattice,
            norm,
            json,
        } => {
            let l = load_lattice(&lattice)?;
            let sv = l.short_vectors(norm).map_err(|e| e.to_string())?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "lattice": l,
                        "norm": norm,
                        "count": sv.len(),
                        "vectors": sv.vectors,
                    }))
                    .unwrap()
                );
            } else {
                println!("{} vectors of norm {}", sv.len(), norm);
                for v in &sv.vectors {
                    println!("{}", vector_str(v));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Aut {
            lattice,
            elements,
            json,
        } => {
            let l = load_lattice(&lattice)?;
            let g = full_aut_definite(&l).map_err(|e| e.to_string())?;
            print_group("automorphism group", &l, &g, elements, json);
            Ok(ExitCode::SUCCESS)
        }
        Command::Weyl {
            lattice,
            elements,
            cap,
            json,
        } => {
            let l = load_lattice(&lattice)?;
            let g = weyl_group(&l, cap).map_err(|e| e.to_string())?;
            print_group("Weyl group", &l, &g, elements, json);
            Ok(ExitCode::SUCCESS)
        }
        Command::ClassifyTau { re, im, json } => {
            let tau = UpperHalfPoint::new(re, im).map_err(|e| e.to_string())?;
            let class = classify_tau_elliptic(tau).map_err(|e| e.to_string())?;
            let j = j_invariant(tau).map_err(|e| e.to_string())?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "tau": [re, im],
                        "j": [j.re, j.im],
                        "class": class.order(),
                    }))
                    .unwrap()
                );
            } else {
                println!("j(tau) = {}", j);
                println!("class: {}", class);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::ClassifyLambda { re, im, json } => {
            let lambda = eislat::Complex64::new(re, im);
            let class = classify_lambda(lambda).map_err(|e| e.to_string())?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "lambda": [re, im],
                        "class": class.order(),
                    }))
                    .unwrap()
                );
            } else {
                println!("class: {}", class);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Period { re, im, json } => {
            let tau = UpperHalfPoint::new(re, im).map_err(|e| e.to_string())?;
            let p = constructions::j0(tau).map_err(|e| e.to_string())?;
            let class = stabilizer_class_lattice(tau).map_err(|e| e.to_string())?;
            if json {
                let coords: Vec<[f64; 2]> = p.coords().iter().map(|c| [c.re, c.im]).collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "tau": [re, im],
                        "coords": coords,
                        "norm": p.norm(),
                        "class": class.order(),
                    }))
                    .unwrap()
                );
            } else {
                println!("j0(tau) coordinates:");
                for c in p.coords() {
                    println!("  {:+.9}{:+.9}i", c.re, c.im);
                }
                println!("norm: {:.9}", p.norm());
                println!("class: {}", class);
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn print_group(kind: &str, l: &HermitianLattice, g: &MatrixGroup, elements: bool, json: bool) {
    // orbit summary on the shortest nonzero vectors
    let orbit_summary = l
        .min_nonzero_norm()
        .ok()
        .and_then(|m| l.short_vectors(m).ok().map(|sv| (m, sv)))
        .and_then(|(m, sv)| g.orbits(&sv.vectors).ok().map(|o| (m, sv.len(), o.len())));
    if json {
        let mut obj = json!({
            "lattice": l,
            "kind": kind,
            "order": g.order(),
            "generators": g.generators().len(),
        });
        if let Some((m, count, orbits)) = orbit_summary {
            obj["orbit_summary"] = json!({
                "norm": m,
                "vectors": count,
                "orbits": orbits,
            });
        }
        if elements {
            obj["elements"] = serde_json::to_value(g.elements()).unwrap();
        }
        println!("{}", serde_json::to_string_pretty(&obj).unwrap());
    } else {
        println!("{kind} order: {}", g.order());
        println!("generators: {}", g.generators().len());
        if let Some((m, count, orbits)) = orbit_summary {
            println!("orbits on the {count} vectors of norm {m}: {orbits}");
        }
        if elements {
            for e in g.elements() {
                println!("{}", e);
            }
        }
    }
}
