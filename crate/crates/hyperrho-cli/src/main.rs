//! Command-line front end: family generation, spectral radius, certificate
//! verification, recurrence roots, theorem batteries, and the per-n
//! ordering report.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hyperrho::{
    build_proof_certificates, check_certificate, find_2bridges, make_cycle, make_path,
    order_report, power_method, read_hypergraph, root_a, root_b, root_c, solve_alpha_n,
    solve_tree_alpha, verify_contraction_theorem, Error, Family, FamilySpec, GraftAnchor,
    GraftSite, OrderSettings, PowerSettings, ProofTheorem, RhoMethod, RootBracket,
    UniformHypergraph, VerdictKind, WeightedIncidenceMatrix,
};

#[derive(Parser)]
#[command(
    name = "hyperrho",
    version,
    about = "Spectral radii of uniform hypergraph families: generators, power iteration, \
             weighted-incidence certificates, and ordering reports"
)]
struct Cli {
    /// Numeric tolerance; each subcommand picks its own default
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Iteration cap for the power method
    #[arg(long, global = true, default_value_t = 1_000_000)]
    max_iter: u64,

    /// Output format (default: json for single results, csv for tables)
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Power,
    Certificate,
}

#[derive(Clone, Copy, ValueEnum)]
enum RootKind {
    A,
    B,
    C,
    #[value(name = "alpha_n", alias = "alpha-n")]
    AlphaN,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a named family and emit its JSON
    Family {
        /// Family name: path, E, F, G, cycle, BD
        #[arg(long)]
        family: String,
        /// Comma-separated parameters, e.g. 1,2,6
        #[arg(long, value_delimiter = ',')]
        params: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        r: usize,
    },
    /// Spectral radius of a generated family or a graph file
    Rho {
        #[arg(long)]
        family: Option<String>,
        #[arg(long, value_delimiter = ',')]
        params: Vec<usize>,
        #[arg(long)]
        r: Option<usize>,
        /// Hypergraph JSON produced by `family` or written by hand
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Override the power-iteration diagonal shift
        #[arg(long)]
        shift: Option<f64>,
        #[arg(long, value_enum, default_value_t = Method::Power)]
        method: Method,
    },
    /// Check a weighted-incidence certificate against a graph
    Certify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Roots of the weight recurrences: a_i, b_i, c_i, alpha_n
    Roots {
        #[arg(long, value_enum)]
        kind: RootKind,
        /// Single index or inclusive range, e.g. 10 or 2..12
        #[arg(long)]
        index: String,
    },
    /// Run a theorem battery over a parameter range
    Verify {
        /// One of: hkl, H+kl, divid-t, cor3.4-1..4, cor3.5, cor3.7,
        /// th-G-vs-F, th2-F-vs-E, th-G-vs-E
        #[arg(long)]
        theorem: String,
        /// Inclusive range, e.g. 7..14
        #[arg(long)]
        range: String,
        #[arg(long, default_value_t = 3)]
        r: usize,
    },
    /// Per-n ordering report for the extremal families
    Order {
        #[arg(long, default_value_t = 3)]
        r: usize,
        /// Single n or inclusive range, e.g. 7..30
        #[arg(long)]
        n: String,
        #[arg(long, value_enum, default_value_t = Method::Power)]
        method: Method,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome { text, failed }) => {
            let write_result = match &cli.out {
                Some(path) => std::fs::write(path, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = write_result {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

struct Outcome {
    text: String,
    failed: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome {
            text,
            failed: false,
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Family { family, params, r } => cmd_family(cli, family, params, *r),
        Command::Rho {
            family,
            params,
            r,
            graph,
            shift,
            method,
        } => cmd_rho(
            cli,
            family.as_deref(),
            params,
            *r,
            graph.as_deref(),
            *shift,
            *method,
        ),
        Command::Certify { graph, cert } => cmd_certify(cli, graph, cert),
        Command::Roots { kind, index } => cmd_roots(cli, *kind, index),
        Command::Verify { theorem, range, r } => cmd_verify(cli, theorem, range, *r),
        Command::Order { r, n, method } => cmd_order(cli, *r, n, *method),
    }
}

fn power_settings(cli: &Cli, shift: Option<f64>) -> PowerSettings {
    PowerSettings {
        tol: cli.tol.unwrap_or(1e-12),
        max_iter: cli.max_iter,
        shift,
    }
}

/// Inclusive "lo..hi" or a single value.
fn parse_range(text: &str) -> Result<(usize, usize), Error> {
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidParams(format!("cannot parse {s:?} as an integer")))
    };
    if let Some((lo, hi)) = text.split_once("..") {
        let lo = parse(lo)?;
        let hi = parse(hi.trim_start_matches('='))?;
        if hi < lo {
            return Err(Error::InvalidParams(format!("empty range {text:?}")));
        }
        Ok((lo, hi))
    } else {
        let v = parse(text)?;
        Ok((v, v))
    }
}

fn build_graph(
    family: Option<&str>,
    params: &[usize],
    r: Option<usize>,
    graph: Option<&std::path::Path>,
) -> Result<UniformHypergraph, Error> {
    match (family, graph) {
        (Some(name), None) => {
            let fam = Family::parse(name)?;
            FamilySpec::generated(fam, params.to_vec(), r.unwrap_or(3))?.build()
        }
        (None, Some(path)) => read_hypergraph(path),
        _ => Err(Error::InvalidParams(
            "give exactly one of --family or --graph".into(),
        )),
    }
}

fn cmd_family(_cli: &Cli, family: &str, params: &[usize], r: usize) -> Result<Outcome, Error> {
    let fam = Family::parse(family)?;
    let h = FamilySpec::generated(fam, params.to_vec(), r)?.build()?;
    Ok(Outcome::ok(h.to_json_string()))
}

fn cmd_rho(
    cli: &Cli,
    family: Option<&str>,
    params: &[usize],
    r: Option<usize>,
    graph: Option<&std::path::Path>,
    shift: Option<f64>,
    method: Method,
) -> Result<Outcome, Error> {
    let h = build_graph(family, params, r, graph)?;
    let (rho, alpha, residual, iterations, converged) = match method {
        Method::Power => match power_method(&h, &power_settings(cli, shift)) {
            Ok(res) => {
                let alpha = hyperrho::alpha_from_rho(res.rho, h.r())?;
                (res.rho, alpha, res.residual, res.iterations, res.converged)
            }
            // report the sandwich bounds instead of failing silently; the
            // bound width stands in for the residual
            Err(Error::NotConverged {
                lower,
                upper,
                iterations,
            }) => {
                let rho = 0.5 * (lower + upper);
                let alpha = hyperrho::alpha_from_rho(rho, h.r())?;
                (rho, alpha, upper - lower, iterations, false)
            }
            Err(e) => return Err(e),
        },
        Method::Certificate => {
            let cert = solve_tree_alpha(&h, cli.tol.unwrap_or(1e-12))?;
            let rho = hyperrho::rho_from_alpha(cert.alpha, h.r())?;
            (rho, cert.alpha, 0.0, 0, true)
        }
    };
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Json => format!(
            "{}\n",
            serde_json::json!({
                "rho": rho,
                "alpha": alpha,
                "residual": residual,
                "iterations": iterations,
                "converged": converged,
            })
        ),
        Format::Csv => format!(
            "rho,alpha,residual,iterations,converged\n{rho:.12},{alpha:.12},{residual:.3e},{iterations},{converged}\n"
        ),
    };
    Ok(Outcome {
        text,
        failed: !converged,
    })
}

fn cmd_certify(cli: &Cli, graph: &PathBuf, cert: &PathBuf) -> Result<Outcome, Error> {
    let h = read_hypergraph(graph)?;
    let (alpha, entries) = hyperrho::read_certificate(cert)?;
    let b = WeightedIncidenceMatrix::from_entries(&h, entries)?;
    let verdict = check_certificate(&h, &b, alpha, cli.tol.unwrap_or(1e-9))?;
    let failed = verdict.kind == VerdictKind::Invalid;
    let text = format!(
        "{}\n",
        serde_json::to_string_pretty(&verdict).expect("verdict serializes")
    );
    Ok(Outcome { text, failed })
}

fn cmd_roots(cli: &Cli, kind: RootKind, index: &str) -> Result<Outcome, Error> {
    let (lo, hi) = parse_range(index)?;
    let tol = cli.tol.unwrap_or(hyperrho::DEFAULT_TOL);
    let mut rows: Vec<(String, usize, RootBracket)> = Vec::new();
    for i in lo..=hi {
        let (name, bracket) = match kind {
            RootKind::A => ("a", root_a(i, tol)?),
            RootKind::B => ("b", root_b(i, tol)?),
            RootKind::C => ("c", root_c(i, tol)?),
            RootKind::AlphaN => ("alpha_n", solve_alpha_n(i, tol)?),
        };
        rows.push((name.to_string(), i, bracket));
    }
    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("kind,index,value,tol\n");
            for (name, i, b) in &rows {
                s.push_str(&format!("{name},{i},{:.15},{:.3e}\n", b.value, b.tol));
            }
            s
        }
        Format::Json => {
            let items: Vec<serde_json::Value> = rows
                .iter()
                .map(|(name, i, b)| {
                    serde_json::json!({
                        "kind": name, "index": i, "value": b.value,
                        "lo": b.lo, "hi": b.hi, "tol": b.tol,
                    })
                })
                .collect();
            format!(
                "{}\n",
                serde_json::to_string_pretty(&items).expect("roots serialize")
            )
        }
    };
    Ok(Outcome::ok(text))
}

struct VerifyRow {
    instance: String,
    value_a: f64,
    value_b: f64,
    margin: f64,
    pass: bool,
}

fn cmd_verify(cli: &Cli, theorem: &str, range: &str, r: usize) -> Result<Outcome, Error> {
    let (lo, hi) = parse_range(range)?;
    let margin_tol = cli.tol.unwrap_or(1e-9);
    let power = power_settings(cli, None);
    let rho = |h: &UniformHypergraph| power_method(h, &power).map(|res| res.rho);

    let mut rows: Vec<VerifyRow> = Vec::new();
    match theorem {
        "hkl" | "H+kl" => {
            // instances are (k, l) with l >= k >= 1 and k + l in the range
            for s in lo..=hi {
                for k in 1..=s / 2 {
                    let l = s - k;
                    let site = if theorem == "hkl" {
                        GraftSite {
                            host: UniformHypergraph::new(r, r, vec![(0..r).collect()])?,
                            anchor: GraftAnchor::Center { vertex: 0 },
                            k,
                            l,
                        }
                    } else {
                        let host = make_path(2, r)?;
                        let w = host.find_label("v1").expect("path labels v1");
                        let mut free = host.edges()[0].iter().copied().filter(|&x| x != w);
                        let u = free.next().expect("rank >= 3");
                        let v = free
                            .next()
                            .ok_or_else(|| Error::InvalidParams("H+kl needs rank >= 3".into()))?;
                        GraftSite {
                            host,
                            anchor: GraftAnchor::EdgePair { edge: 0, u, v },
                            k,
                            l,
                        }
                    };
                    let (attached, regrafted) = if theorem == "hkl" {
                        hyperrho::graft_center(&site)?
                    } else {
                        hyperrho::graft_edge_pair(&site)?
                    };
                    let a = rho(&attached)?;
                    let b = rho(&regrafted)?;
                    rows.push(VerifyRow {
                        instance: format!("k={k};l={l}"),
                        value_a: a,
                        value_b: b,
                        margin: a - b,
                        pass: a - b > margin_tol,
                    });
                }
            }
        }
        "divid-t" | "divid" | "contraction" => {
            for n in lo.max(7)..=hi {
                let g = hyperrho::make_g(1, 1, n - 6, 1, 1, r)?;
                for bridge in find_2bridges(&g) {
                    let report = verify_contraction_theorem(&g, &bridge, &power)?;
                    rows.push(VerifyRow {
                        instance: format!("n={n};edge={}", bridge.edge),
                        value_a: report.rho_before,
                        value_b: report.rho_after.unwrap_or(f64::NAN),
                        margin: report.margin.unwrap_or(0.0),
                        pass: report.holds(margin_tol),
                    });
                }
            }
        }
        "cor3.4-1" | "cor3.4-2" | "cor3.4-3" | "cor3.4-4" => {
            for n in lo..=hi {
                let (bigger, smaller, min_n): (UniformHypergraph, UniformHypergraph, usize) =
                    match theorem {
                        "cor3.4-1" => (
                            hyperrho::make_f(1, 2, n.saturating_sub(4).max(1), r)?,
                            hyperrho::make_f(1, 1, n.saturating_sub(3).max(1), r)?,
                            6,
                        ),
                        "cor3.4-2" => (
                            hyperrho::make_g(1, 1, n.saturating_sub(6), 1, 1, r)?,
                            hyperrho::make_f(1, 1, n.saturating_sub(3).max(1), r)?,
                            6,
                        ),
                        "cor3.4-3" => (
                            hyperrho::make_f(1, 4, n.saturating_sub(1).max(1), r)?,
                            hyperrho::make_f(1, 3, n, r)?,
                            5,
                        ),
                        _ => (
                            hyperrho::make_g(1, 2, n.saturating_sub(7), 1, 1, r)?,
                            hyperrho::make_f(1, 2, n.saturating_sub(4).max(1), r)?,
                            7,
                        ),
                    };
                if n < min_n {
                    continue;
                }
                let a = rho(&bigger)?;
                let b = rho(&smaller)?;
                rows.push(VerifyRow {
                    instance: format!("n={n}"),
                    value_a: a,
                    value_b: b,
                    margin: a - b,
                    pass: a - b > margin_tol,
                });
            }
        }
        "cor3.5" => {
            for n in lo.max(4)..=hi {
                let base = rho(&make_path(n, r)?)?;
                let mut rivals: Vec<(&str, UniformHypergraph)> = vec![
                    ("E", hyperrho::make_e(1, 1, n - 2, r)?),
                    ("F11", hyperrho::make_f(1, 1, n - 3, r)?),
                    ("C", make_cycle(n, r)?),
                ];
                if n >= 5 {
                    rivals.push(("F12", hyperrho::make_f(1, 2, n - 4, r)?));
                }
                if n >= 6 {
                    rivals.push(("G11", hyperrho::make_g(1, 1, n - 6, 1, 1, r)?));
                }
                if n >= 7 {
                    rivals.push(("G12", hyperrho::make_g(1, 2, n - 7, 1, 1, r)?));
                }
                if n >= 8 {
                    rivals.push(("BD", hyperrho::make_bd(n, r)?));
                }
                for (name, rival) in rivals {
                    let other = rho(&rival)?;
                    rows.push(VerifyRow {
                        instance: format!("n={n};vs={name}"),
                        value_a: base,
                        value_b: other,
                        margin: other - base,
                        pass: other - base > margin_tol,
                    });
                }
            }
        }
        "cor3.7" => {
            for n in lo..=hi {
                if n >= 7 {
                    let a = rho(&hyperrho::make_g(1, 1, n - 5, 1, 1, r)?)?;
                    let b = rho(&hyperrho::make_g(1, 1, n - 6, 1, 1, r)?)?;
                    rows.push(VerifyRow {
                        instance: format!("G;k={}", n - 6),
                        value_a: a,
                        value_b: b,
                        margin: a - b,
                        pass: a - b > margin_tol,
                    });
                }
                if n >= 8 {
                    let a = rho(&hyperrho::make_bd(n + 1, r)?)?;
                    let b = rho(&hyperrho::make_bd(n, r)?)?;
                    rows.push(VerifyRow {
                        instance: format!("BD;n={n}"),
                        value_a: a,
                        value_b: b,
                        margin: a - b,
                        pass: a - b > margin_tol,
                    });
                }
            }
        }
        other => {
            // proof-certificate theorems: columns carry alpha and the defect
            let proof = ProofTheorem::parse(other)?;
            for n in lo..=hi {
                let cert = build_proof_certificates(proof, &[n], r)?;
                let pass = cert.reproduces_claim(margin_tol)?;
                rows.push(VerifyRow {
                    instance: format!("n={n}"),
                    value_a: cert.alpha,
                    value_b: cert.defect,
                    margin: cert.defect.abs(),
                    pass,
                });
            }
        }
    }

    let failed = rows.iter().any(|row| !row.pass);
    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("theorem,instance,value_a,value_b,margin,pass\n");
            for row in &rows {
                s.push_str(&format!(
                    "{theorem},{},{:.12},{:.12},{:.3e},{}\n",
                    row.instance, row.value_a, row.value_b, row.margin, row.pass
                ));
            }
            s
        }
        Format::Json => {
            let items: Vec<serde_json::Value> = rows
                .iter()
                .map(|row| {
                    serde_json::json!({
                        "theorem": theorem, "instance": row.instance,
                        "value_a": row.value_a, "value_b": row.value_b,
                        "margin": row.margin, "pass": row.pass,
                    })
                })
                .collect();
            format!(
                "{}\n",
                serde_json::to_string_pretty(&items).expect("rows serialize")
            )
        }
    };
    Ok(Outcome { text, failed })
}

fn cmd_order(cli: &Cli, r: usize, n_range: &str, method: Method) -> Result<Outcome, Error> {
    let (lo, hi) = parse_range(n_range)?;
    let settings = OrderSettings {
        margin_tol: cli.tol.unwrap_or(1e-9),
        method: match method {
            Method::Power => RhoMethod::Power,
            Method::Certificate => RhoMethod::Certificate,
        },
        power: power_settings(cli, None),
        ..OrderSettings::default()
    };
    let mut reports = Vec::new();
    for n in lo..=hi {
        reports.push(order_report(r, n, &settings)?);
    }
    let failed = reports
        .iter()
        .any(|rep| !rep.chain_ok || rep.chain_ok_with_bd == Some(false));
    let text = match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from(hyperrho::ordering::CSV_HEADER);
            s.push('\n');
            for rep in &reports {
                for line in rep.csv_rows() {
                    s.push_str(&line);
                    s.push('\n');
                }
            }
            s
        }
        Format::Json => {
            let items: Vec<serde_json::Value> = reports
                .iter()
                .map(|rep| serde_json::to_value(rep).expect("report serializes"))
                .collect();
            format!(
                "{}\n",
                serde_json::to_string_pretty(&items).expect("reports serialize")
            )
        }
    };
    Ok(Outcome { text, failed })
}
