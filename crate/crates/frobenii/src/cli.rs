//! Command-line front end. Every command prints one JSON report
//! `{command, inputs, status, results, residuals}` and maps its outcome to an
//! exit code: 0 success, 1 failed check, 2 usage or input error.

use crate::error::{Error, Result};
use crate::frobenius::{self, catalog, catalog_names, check_quasihomogeneity, check_wdvv1, check_wdvv1_mod};
use crate::kernel::cjson::{matrix_to_pairs, pair};
use crate::kernel::rational::{fmt_rational, parse_rational};
use crate::{gw, pvi, semisimple, singularity, stokes};
use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Environment variable that overrides orbit size caps.
pub const MAX_ORBIT_ENV: &str = "FROBENII_MAX_ORBIT";

#[derive(Parser, Debug)]
#[command(name = "frobenii", version, about = "WDVV solutions, Frobenius manifolds and their monodromy data")]
pub struct Cli {
    /// Also write tabular data to this CSV file.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Embedded potentials and Stokes matrices.
    Catalog {
        #[command(subcommand)]
        action: CatalogCmd,
    },
    /// Exact WDVV checks.
    Wdvv {
        #[command(subcommand)]
        action: WdvvCmd,
    },
    /// Gromov-Witten invariants of CP².
    Gw {
        #[command(subcommand)]
        action: GwCmd,
    },
    /// Stokes matrices and the braid group action.
    Stokes {
        #[command(subcommand)]
        action: StokesCmd,
    },
    /// Painlevé VI.
    Pvi {
        #[command(subcommand)]
        action: PviCmd,
    },
    /// Isomonodromic deformations in canonical coordinates.
    Iso {
        #[command(subcommand)]
        action: IsoCmd,
    },
    /// Singularity theory constructions.
    Sing {
        #[command(subcommand)]
        action: SingCmd,
    },
}

#[derive(Subcommand, Debug)]
pub enum CatalogCmd {
    List,
    Show {
        name: String,
        /// Show the Stokes matrix of that name instead of the potential.
        #[arg(long)]
        stokes: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum WdvvCmd {
    /// NAME is a catalog entry, `CP2(K)` for a truncated CP² potential, or a
    /// potential JSON file.
    Check { target: String },
}

#[derive(Subcommand, Debug)]
pub enum GwCmd {
    Nk {
        #[arg(long = "max")]
        max: usize,
    },
    Elliptic {
        #[arg(long = "max")]
        max: usize,
    },
    Fit {
        #[arg(long = "max")]
        max: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum StokesCmd {
    Orbit {
        target: String,
        #[arg(long = "max-size", default_value_t = 10_000)]
        max_size: usize,
        /// Number of representatives listed in the report.
        #[arg(long, default_value_t = 20)]
        show: usize,
    },
    Braid {
        target: String,
        /// Generators such as "1,-2,3" (negative means inverse).
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    Cp2Monodromy,
}

#[derive(Subcommand, Debug)]
pub enum PviCmd {
    Verify {
        family: String,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Use this μ₁ instead of the family value (negative control).
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<String>,
        /// Use the parametrization exactly as typeset.
        #[arg(long)]
        printed: bool,
    },
    /// Integrate from the curve point at `--s0` towards `x(--s1)` and compare
    /// with the curve there. `--via re,im` adds intermediate x waypoints.
    Integrate {
        family: String,
        #[arg(long, allow_hyphen_values = true)]
        s0: f64,
        #[arg(long, allow_hyphen_values = true)]
        s1: f64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        via: Vec<Complex64>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

#[derive(Subcommand, Debug)]
pub enum IsoCmd {
    Integrate {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        path: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Canonical frame and `(u, V)` state of a catalog potential at a point.
    Frame {
        name: String,
        /// Point `t` as comma-separated reals, or `re:im` entries.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum SingCmd {
    An {
        #[arg(long)]
        n: usize,
    },
}

fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let parts: Vec<&str> = s.split([',', ':']).collect();
    let f = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x}: {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(f(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(f(re)?, f(im)?)),
        _ => Err(format!("not a complex number: {s}")),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    fn of(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        }
    }
}

/// Outcome of one command before serialization.
pub struct Outcome {
    pub inputs: Value,
    pub status: Status,
    pub results: Value,
    pub residuals: Value,
    /// Header and rows for `--csv`.
    pub table: Option<(Vec<String>, Vec<Vec<String>>)>,
}

fn cpair(z: Complex64) -> Value {
    json!(pair(z))
}

fn sci(x: f64) -> String {
    format!("{x:e}")
}

fn load_potential(target: &str) -> Result<frobenius::FrobeniusPotential> {
    if Path::new(target).is_file() {
        let text = std::fs::read_to_string(target).map_err(|e| Error::Invalid(e.to_string()))?;
        return frobenius::io::from_json(&text);
    }
    if let Some(k) = target.strip_prefix("CP2(").and_then(|s| s.strip_suffix(')')) {
        let k: usize = k.parse().map_err(|_| Error::UnknownName(target.into()))?;
        return gw::truncated_potential(k);
    }
    catalog(target)
}

fn load_stokes(target: &str) -> Result<stokes::StokesMatrix> {
    if Path::new(target).is_file() {
        let text = std::fs::read_to_string(target).map_err(|e| Error::Invalid(e.to_string()))?;
        return stokes::from_json(&text);
    }
    stokes::stokes_catalog(target)
}

fn read(p: &Path) -> Result<String> {
    std::fs::read_to_string(p).map_err(|e| Error::Invalid(format!("{}: {e}", p.display())))
}

fn orbit_cap(flag: usize) -> Result<usize> {
    match std::env::var(MAX_ORBIT_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| Error::Invalid(format!("{MAX_ORBIT_ENV}={v}"))),
        Err(_) => Ok(flag),
    }
}

fn strings<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn matrix_strings(m: &crate::kernel::ExactMatrix) -> Vec<Vec<String>> {
    m.rows().iter().map(|r| strings(r)).collect()
}

pub fn execute(cmd: &Command) -> Result<(String, Outcome)> {
    Ok(match cmd {
        Command::Catalog { action } => match action {
            CatalogCmd::List => (
                "catalog list".into(),
                Outcome {
                    inputs: json!({}),
                    status: Status::Pass,
                    results: json!({"potentials": catalog_names(), "stokes": stokes::stokes_names()}),
                    residuals: json!({}),
                    table: None,
                },
            ),
            CatalogCmd::Show { name, stokes: st } => {
                let results = if *st {
                    let s = stokes::stokes_catalog(name)?;
                    serde_json::from_str::<Value>(&stokes::to_json(&s)).expect("valid json")
                } else {
                    let p = catalog(name)?;
                    json!({
                        "potential": serde_json::from_str::<Value>(&frobenius::io::to_json(&p)).expect("valid json"),
                        "F": p.f.to_string(),
                        "eta": matrix_strings(&p.metric_eta()?),
                    })
                };
                (
                    "catalog show".into(),
                    Outcome {
                        inputs: json!({"name": name, "stokes": st}),
                        status: Status::Pass,
                        results,
                        residuals: json!({}),
                        table: None,
                    },
                )
            }
        },
        Command::Wdvv { action: WdvvCmd::Check { target } } => {
            let p = load_potential(target)?;
            let truncated = target.starts_with("CP2(");
            let w = if truncated {
                let k = p.f.max_exp(1);
                check_wdvv1_mod(&p, 1, k)?
            } else {
                check_wdvv1(&p)?
            };
            let quasi = if truncated { None } else { Some(check_quasihomogeneity(&p)?) };
            let first = |r: &frobenius::ResidualReport| {
                r.failures.first().map(|(_, e)| e.to_string()).unwrap_or_else(|| "0".into())
            };
            let mut residuals = json!({"wdvv1": first(&w)});
            let mut ok = w.pass;
            let mut results = json!({
                "name": p.name,
                "n": p.n(),
                "wdvv1": {"pass": w.pass, "checked": w.checked, "failures": w.failures.len()},
            });
            if let Some(q) = &quasi {
                residuals["quasihomogeneity"] = json!(first(&q.report));
                results["quasihomogeneity"] = json!({"pass": q.report.pass, "added": q.added.to_string()});
                ok &= q.report.pass;
            }
            let table = Some((
                vec!["label".into(), "residual".into()],
                w.failures.iter().map(|(l, e)| vec![l.clone(), e.to_string()]).collect(),
            ));
            (
                "wdvv check".into(),
                Outcome { inputs: json!({"target": target}), status: Status::of(ok), results, residuals, table },
            )
        }
        Command::Gw { action } => gw_command(action)?,
        Command::Stokes { action } => stokes_command(action)?,
        Command::Pvi { action } => pvi_command(action)?,
        Command::Iso { action } => iso_command(action)?,
        Command::Sing { action: SingCmd::An { n } } => {
            let st = singularity::a_n_structure(*n)?;
            let metric = singularity::a_n_metric(*n)?;
            let w = check_wdvv1(&st.potential)?;
            let eta_ok = st.potential.metric_eta()? == st.flat.eta;
            let c: serde_json::Map<String, Value> =
                st.c.iter().map(|((a, b, g), e)| (format!("c{}{}{}", a + 1, b + 1, g + 1), json!(e.to_string()))).collect();
            (
                "sing an".into(),
                Outcome {
                    inputs: json!({"n": n}),
                    status: Status::of(w.pass && eta_ok),
                    results: json!({
                        "metric_s": metric.iter().map(|r| strings(r)).collect::<Vec<_>>(),
                        "s_of_t": strings(&st.flat.s_of_t),
                        "eta": matrix_strings(&st.flat.eta),
                        "c": c,
                        "F": st.potential.f.to_string(),
                        "potential": serde_json::from_str::<Value>(&frobenius::io::to_json(&st.potential)).expect("valid json"),
                    }),
                    residuals: json!({
                        "wdvv1": if w.pass { "0".to_string() } else { w.failures[0].1.to_string() },
                        "eta_vs_third_derivatives": if eta_ok { "0" } else { "nonzero" },
                    }),
                    table: None,
                },
            )
        }
    })
}

fn gw_command(action: &GwCmd) -> Result<(String, Outcome)> {
    Ok(match action {
        GwCmd::Nk { max } => {
            let rows = gw::genus0_invariants(*max)?;
            // independent PDE route where it is cheap
            let pde_k = (*max).min(20);
            let pde = gw::genus0_via_pde(pde_k)?;
            let a = gw::genus0_coefficients(pde_k);
            let agree = pde == a;
            (
                "gw nk".into(),
                Outcome {
                    inputs: json!({"max": max}),
                    status: Status::of(agree),
                    results: json!({"rows": rows}),
                    residuals: json!({"pde_route_mismatches": a.iter().zip(&pde).filter(|(x, y)| x != y).count(), "checked_up_to": pde_k}),
                    table: Some((
                        vec!["k".into(), "N_k".into()],
                        rows.iter().map(|r| vec![r.k.to_string(), r.n_k.to_string()]).collect(),
                    )),
                },
            )
        }
        GwCmd::Elliptic { max } => {
            let rows = gw::elliptic_invariants(*max)?;
            let other = gw::elliptic_with(*max, gw::Division::Newton)?;
            (
                "gw elliptic".into(),
                Outcome {
                    inputs: json!({"max": max}),
                    status: Status::of(rows == other),
                    results: json!({"constant": "-1/8", "rows": rows}),
                    residuals: json!({"division_mismatches": rows.iter().zip(&other).filter(|(x, y)| x != y).count()}),
                    table: Some((
                        vec!["k".into(), "N1_k".into()],
                        rows.iter().map(|r| vec![r.k.to_string(), r.n1_k.to_string()]).collect(),
                    )),
                },
            )
        }
        GwCmd::Fit { max } => {
            let fit = gw::asymptotic_fit(*max)?;
            let conv = gw::convergence_bound_check(*max, 0.0)?;
            let rows = gw::table(*max)?;
            (
                "gw fit".into(),
                Outcome {
                    inputs: json!({"max": max}),
                    status: Status::Pass,
                    results: json!({"fit": fit, "corrected_ratio": conv.corrected_ratio, "last_ratio": conv.last_ratio}),
                    residuals: json!({}),
                    table: Some((
                        strings(&["k", "N_k", "N1_k", "A_k", "ratio"]),
                        rows.iter().map(|r| vec![r.k.to_string(), r.n_k.clone(), r.n1_k.clone(), r.a_k.clone(), r.ratio.clone()]).collect(),
                    )),
                },
            )
        }
    })
}

fn stokes_command(action: &StokesCmd) -> Result<(String, Outcome)> {
    Ok(match action {
        StokesCmd::Orbit { target, max_size, show } => {
            let s = load_stokes(target)?;
            let cap = orbit_cap(*max_size)?;
            let o = stokes::orbit(&s, cap);
            let rep = stokes::orbit_report(&o, *show);
            let rows = match &o {
                stokes::Orbit::Finite(v) => v.iter().map(|m| strings(&m.upper())).collect(),
                _ => vec![],
            };
            (
                "stokes orbit".into(),
                Outcome {
                    inputs: json!({"target": target, "max_size": cap}),
                    status: Status::Pass,
                    results: serde_json::to_value(&rep).expect("serializable"),
                    residuals: json!({}),
                    table: Some((
                        (0..s.n() * (s.n() - 1) / 2).map(|i| format!("s{i}")).collect(),
                        rows,
                    )),
                },
            )
        }
        StokesCmd::Braid { target, word } => {
            let s = load_stokes(target)?;
            let w = stokes::BraidWord::parse(word)?;
            let out = stokes::braid_apply(&s, &w)?;
            let canon = stokes::canonical_form(&out);
            let mut residuals = json!({});
            let mut ok = true;
            if let (Some((x, y, z)), Some((a, b, c))) = (s.as_triple(), out.as_triple()) {
                let d = stokes::markoff_form(&a, &b, &c)?.try_sub(&stokes::markoff_form(&x, &y, &z)?)?;
                ok = d.is_zero();
                residuals["markoff_change"] = json!(d.to_string());
            }
            let cp_in = stokes::unipotency_spectrum(&s)?.char_poly;
            let cp_out = stokes::unipotency_spectrum(&out)?.char_poly;
            ok &= cp_in == cp_out;
            residuals["char_poly_changed"] = json!(cp_in != cp_out);
            (
                "stokes braid".into(),
                Outcome {
                    inputs: json!({"target": target, "word": w.0}),
                    status: Status::of(ok),
                    results: json!({
                        "input": strings(&s.upper()),
                        "output": strings(&out.upper()),
                        "canonical": strings(&canon.upper()),
                    }),
                    residuals,
                    table: Some((strings(&["role", "upper"]), vec![
                        vec!["input".into(), strings(&s.upper()).join(" ")],
                        vec!["canonical".into(), strings(&canon.upper()).join(" ")],
                    ])),
                },
            )
        }
        StokesCmd::Cp2Monodromy => {
            let r = stokes::cp2_modular_check()?;
            let (refl, t) = stokes::cp2_monodromy_matrices();
            (
                "stokes cp2-monodromy".into(),
                Outcome {
                    inputs: json!({}),
                    status: Status::of(r.pass()),
                    results: json!({
                        "checks": r,
                        "R": refl.iter().map(matrix_strings).collect::<Vec<_>>(),
                        "T": matrix_strings(&t),
                    }),
                    residuals: json!({}),
                    table: None,
                },
            )
        }
    })
}

fn pvi_command(action: &PviCmd) -> Result<(String, Outcome)> {
    Ok(match action {
        PviCmd::Verify { family, samples, tol, mu, printed } => {
            let f = pvi::Family::parse(family)?;
            let mu1 = match mu {
                Some(m) => parse_rational(m)?,
                None => f.mu(),
            };
            let curve = if *printed { pvi::printed_parametrization(f) } else { pvi::parametrization(f) };
            let r = pvi::verify_curve(&curve, f.name(), *samples, mu1.clone())?;
            (
                "pvi verify".into(),
                Outcome {
                    inputs: json!({"family": family, "samples": samples, "tol": tol, "mu": fmt_rational(&mu1), "printed": printed}),
                    status: Status::of(r.max_residual < *tol),
                    results: json!({"family": r.family, "mu": r.mu, "samples": r.samples}),
                    residuals: json!({"max_residual": r.max_residual}),
                    table: Some((
                        strings(&["s", "x", "y", "residual"]),
                        r.trace.iter().map(|(s, x, y, e)| vec![s.to_string(), x.re.to_string(), y.re.to_string(), sci(*e)]).collect(),
                    )),
                },
            )
        }
        PviCmd::Integrate { family, s0, s1, via, tol } => {
            let f = pvi::Family::parse(family)?;
            let c = pvi::parametrization(f);
            let [x0, y0, yp0, _] = pvi::curve_jet(&c, Complex64::new(*s0, 0.0))?;
            let [x1, y1, yp1, _] = pvi::curve_jet(&c, Complex64::new(*s1, 0.0))?;
            let pt = pvi::PviPoint { mu1: f.mu(), x: x0, y: y0, yprime: yp0 };
            let mut way = via.clone();
            way.push(x1);
            let tr = pvi::pvi_integrate_path(&pt, &way, *tol)?;
            let err_y = (tr.end.y - y1).norm();
            let err_yp = (tr.end.yprime - yp1).norm();
            (
                "pvi integrate".into(),
                Outcome {
                    inputs: json!({"family": family, "s0": s0, "s1": s1, "via": via.iter().map(|z| pair(*z)).collect::<Vec<_>>(), "tol": tol}),
                    status: Status::of(err_y < 1e-7),
                    results: json!({"x": cpair(tr.end.x), "y": cpair(tr.end.y), "yprime": cpair(tr.end.yprime), "steps": tr.steps}),
                    residuals: json!({"y_vs_curve": err_y, "yprime_vs_curve": err_yp}),
                    table: Some((
                        strings(&["x_re", "x_im", "y_re", "y_im"]),
                        tr.points.iter().map(|(x, y, _)| vec![x.re.to_string(), x.im.to_string(), y.re.to_string(), y.im.to_string()]).collect(),
                    )),
                },
            )
        }
    })
}

fn iso_command(action: &IsoCmd) -> Result<(String, Outcome)> {
    Ok(match action {
        IsoCmd::Integrate { state, path, tol } => {
            let s0 = semisimple::IsoState::from_json(&read(state)?)?;
            let p = semisimple::path_from_json(&read(path)?)?;
            let r = semisimple::integrate_isomonodromic(&s0, &p, *tol)?;
            let d = &r.diagnostics;
            let bound = (1e3 * tol).max(1e-12);
            (
                "iso integrate".into(),
                Outcome {
                    inputs: json!({"state": state, "path": path, "tol": tol}),
                    status: Status::of(d.max_spectral_drift < bound && d.max_skew < bound),
                    results: json!({
                        "state": serde_json::from_str::<Value>(&r.state.to_json()).expect("valid json"),
                        "log_tau": cpair(r.log_tau),
                        "steps": d.steps,
                        "rejected": d.rejected,
                    }),
                    residuals: json!({"spectral_drift": d.max_spectral_drift, "skew": d.max_skew}),
                    table: None,
                },
            )
        }
        IsoCmd::Frame { name, point } => {
            let p = load_potential(name)?;
            let t = point
                .split(',')
                .map(|s| parse_complex(s).map_err(Error::Parse))
                .collect::<Result<Vec<_>>>()?;
            let fr = semisimple::canonical_coordinates(&p, &t)?;
            let st = semisimple::IsoState::from_frame(&fr)?;
            let orth = fr.orthogonality_residual();
            (
                "iso frame".into(),
                Outcome {
                    inputs: json!({"name": name, "point": t.iter().map(|z| pair(*z)).collect::<Vec<_>>()}),
                    status: Status::of(orth < 1e-8),
                    results: json!({
                        "u": fr.u.iter().map(|z| pair(*z)).collect::<Vec<_>>(),
                        "psi": matrix_to_pairs(&fr.psi),
                        "mu": fr.mu.iter().map(fmt_rational).collect::<Vec<_>>(),
                        "state": serde_json::from_str::<Value>(&st.to_json()).expect("valid json"),
                    }),
                    residuals: json!({"orthogonality": orth, "skew": st.skewness()}),
                    table: None,
                },
            )
        }
    })
}

fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::Invalid(e.to_string()))?;
    w.write_record(header).map_err(|e| Error::Invalid(e.to_string()))?;
    for r in rows {
        w.write_record(r).map_err(|e| Error::Invalid(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Invalid(e.to_string()))
}

/// Parses `args`, runs the command, writes the report to `out` and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let report = match execute(&cli.command) {
        Ok((name, o)) => {
            if let (Some(path), Some((h, rows))) = (&cli.csv, &o.table) {
                if let Err(e) = write_csv(path, h, rows) {
                    return emit_error(out, &name, &e);
                }
            }
            let code = if o.status == Status::Pass { 0 } else { 1 };
            let v = json!({
                "command": name,
                "inputs": o.inputs,
                "status": o.status.label(),
                "results": o.results,
                "residuals": o.residuals,
            });
            (v, code)
        }
        Err(e) => return emit_error(out, &command_name(&cli.command), &e),
    };
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(&report.0).expect("serializable"));
    report.1
}

fn emit_error(out: &mut dyn Write, name: &str, e: &Error) -> i32 {
    let v = json!({"command": name, "inputs": {}, "status": "ERROR", "results": {"error": e.to_string()}, "residuals": {}});
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("serializable"));
    2
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Catalog { .. } => "catalog",
        Command::Wdvv { .. } => "wdvv check",
        Command::Gw { .. } => "gw",
        Command::Stokes { .. } => "stokes",
        Command::Pvi { .. } => "pvi",
        Command::Iso { .. } => "iso",
        Command::Sing { .. } => "sing an",
    }
    .into()
}
