//! Command line front end: assemble nu-bar reports, enumerate gluings,
//! check configurations, evaluate eta contributions and defect invariants,
//! and render torus matching figures.
//!
//! Exit codes: 0 success, 1 validation or usage error, 2 integrality or
//! cross-check failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use num_traits::ToPrimitive;

use etcs_core::assemble::{
    self, cross_check, load_gluing, load_instance, load_polygon, qstring, render_report,
    AssembleError, ReportFormat, Tolerances,
};
use etcs_core::config::Side;
use etcs_core::defect;
use etcs_core::eta::{f_contribution, f_small, EtaParams};
use etcs_core::figure::torus_figure;
use etcs_core::gluing::enumerate_gluings;

#[derive(Parser)]
#[command(name = "etcs", version, about = "Invariants of (extra-)twisted connected sum G2-manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Assemble the nu-bar report for an instance file
    NuBar {
        instance: PathBuf,
        /// First Betti number of the glued manifold
        #[arg(long, default_value_t = 0)]
        b1: u32,
        /// Series tolerance
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Integrality tolerance
        #[arg(long, default_value_t = 1e-6)]
        integrality_tol: f64,
        /// Emit the report as JSON
        #[arg(long)]
        json: bool,
    },
    /// Check an instance against its hyperbolic polygon computation
    CrossCheck {
        instance: PathBuf,
        polygon: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Enumerate admissible gluing matrices up to equivalence
    EnumerateGluings {
        #[arg(long)]
        k_plus: u32,
        #[arg(long)]
        k_minus: u32,
        /// Only list classes with this eps_plus representative
        #[arg(long, allow_negative_numbers = true)]
        eps_plus: Option<i32>,
        /// Only list classes with this eps_minus representative
        #[arg(long, allow_negative_numbers = true)]
        eps_minus: Option<i32>,
        #[arg(long)]
        bound: i64,
        /// Keep all tuples instead of one representative per class
        #[arg(long)]
        no_dedup: bool,
    },
    /// Validate a configuration file and print its angle data
    ConfigCheck {
        configuration: PathBuf,
        /// Check that this cos^2 value (as "a/b") is an eigenvalue
        #[arg(long)]
        cos2: Option<String>,
    },
    /// Classification counts for 2-connected 7-manifolds
    Classify {
        #[arg(long)]
        b3: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        mu: Option<u64>,
    },
    /// Evaluate the torus contribution F_{k,eps}(s) and (144/pi) F
    Eta {
        #[arg(long)]
        k: u32,
        #[arg(long, allow_negative_numbers = true)]
        eps: i32,
        /// s^2 as a fraction "a/b"
        #[arg(long)]
        s_sq: String,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Defect invariants of coboundary data, exit 0 iff all relations hold
    Defect {
        #[arg(long, allow_negative_numbers = true)]
        chi: i64,
        #[arg(long, allow_negative_numbers = true)]
        sigma: i64,
        #[arg(long, allow_negative_numbers = true)]
        n_plus: i64,
        #[arg(long, allow_negative_numbers = true)]
        p_sq: i64,
        #[arg(long)]
        d: u64,
    },
    /// Render a torus matching figure to SVG
    RenderTorus {
        gluing: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// s+ for the right-angle case (free ratio)
        #[arg(long)]
        s_plus: Option<f64>,
        /// s- for the right-angle case (free ratio)
        #[arg(long)]
        s_minus: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err.downcast_ref::<AssembleError>() {
                Some(AssembleError::IntegralityViolation { .. }) => 2,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}

fn parse_q(text: &str) -> anyhow::Result<BigRational> {
    qstring::parse(text).map_err(|e| anyhow::anyhow!("{e}"))
}

fn run(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::NuBar { instance, b1, tol, integrality_tol, json } => {
            let mut inst = load_instance(&instance)?;
            if b1 != 0 {
                inst.b1 = b1;
            }
            let tols = Tolerances { series: tol, integrality: integrality_tol };
            let report = assemble::assemble_nu_bar(&inst, &tols)?;
            let format = if json { ReportFormat::Json } else { ReportFormat::Text };
            print!("{}", render_report(&report, format));
            Ok(ExitCode::SUCCESS)
        }
        Command::CrossCheck { instance, polygon, tol } => {
            let inst = load_instance(&instance)?;
            let poly = load_polygon(&polygon)?;
            let report = cross_check(&inst, &poly, tol)?;
            println!("assembled nu_bar:   {:.9}", report.assembled.nu_bar_real);
            println!("polygon nu_bar:     {:.9}", report.polygon_value);
            if let Some(exact) = &report.polygon_exact {
                println!("polygon exact:      {exact}");
            }
            println!("delta:              {:.3e}", report.delta);
            println!("verdict:            {}", if report.passes { "pass" } else { "FAIL" });
            Ok(if report.passes { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Command::EnumerateGluings { k_plus, k_minus, eps_plus, eps_minus, bound, no_dedup } => {
            let list = enumerate_gluings(k_plus, k_minus, bound, !no_dedup)?;
            let mut shown = 0;
            for g in &list {
                if eps_plus.is_some_and(|e| e != g.eps_plus)
                    || eps_minus.is_some_and(|e| e != g.eps_minus)
                {
                    continue;
                }
                shown += 1;
                let geom = g.derive()?;
                let desc = match (&geom.s_plus_sq, &geom.s_minus_sq) {
                    (Some(sp), Some(sm)) => {
                        format!("s+^2 = {sp}, s-^2 = {sm}, cos^2 theta = {}", geom.cos2_theta)
                    }
                    _ => format!("right angle, ratios free"),
                };
                println!(
                    "eps+ = {:>2}  eps- = {:>2}  G = [[{}, {}], [{}, {}]]  {desc}",
                    g.eps_plus, g.eps_minus, g.m, g.p, g.n, g.q
                );
            }
            println!("{shown} class(es)");
            Ok(ExitCode::SUCCESS)
        }
        Command::ConfigCheck { configuration, cos2 } => {
            let cfg = etcs_core::assemble::load_configuration(&configuration)?;
            println!("rank: {} = {} + {}", cfg.rank(), cfg.r_plus(), cfg.r_minus());
            println!("signature: {}", cfg.gram().signature());
            println!("condition (i): {}", if cfg.condition_i() { "pass" } else { "FAIL" });
            let spectrum = cfg.gluing_angle_cos2()?;
            let desc: Vec<String> = spectrum
                .rational
                .iter()
                .map(|(c, m)| format!("{c} (x{m})"))
                .collect();
            println!("cos^2 spectrum: {}", desc.join(", "));
            if !spectrum.residual.is_empty() {
                println!("irrational factor of degree {}", spectrum.residual.len() - 1);
            }
            if let Some(text) = cos2 {
                let c = parse_q(&text)?;
                let ok = spectrum.contains(&c);
                println!("cos^2 = {c}: {}", if ok { "eigenvalue" } else { "NOT an eigenvalue" });
                if ok {
                    println!(
                        "condition (ii) at {c} on N+: {}",
                        if cfg.condition_ii(&c, Side::Plus) { "pass" } else { "FAIL" }
                    );
                }
                if !ok {
                    return Ok(ExitCode::from(1));
                }
            }
            if cfg.condition_i() {
                match cfg.configuration_angles() {
                    Ok(spec) => {
                        println!("alpha_plus: {}", angles_desc(&spec.alpha_plus));
                        println!("alpha_minus: {}", angles_desc(&spec.alpha_minus));
                    }
                    Err(e) => println!("configuration angles unavailable: {e}"),
                }
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Command::Classify { b3, d, mu } => {
            println!("b3: {b3}");
            if !defect::tcs_d_validation(d) {
                println!("note: d = {d} is not realisable by a twisted connected sum (d | 24 required)");
            }
            let count = defect::smooth_structure_count(d)?;
            println!("d: {d}, d~ = lcm(4, d) = {}", defect::d_tilde(d)?);
            println!("smooth structures (gcd(28, d~/4)): {count}");
            if let Some(mu) = mu {
                println!("mu: {} (mod {count})", mu % count.max(1));
            }
            let (per_nu, total) = defect::g2_class_count(d)?;
            println!("xi classes per nu: {per_nu}");
            println!("G2-structure classes (24 per parity x Num(d/112)): {total}");
            println!("moduli: mu mod {count}, nu mod 48, xi mod {}", 3 * defect::d_tilde(d)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Eta { k, eps, s_sq, tol } => {
            let params = EtaParams::new(k, eps, parse_q(&s_sq)?)?;
            let small = f_small(&params, tol)?;
            let full = f_contribution(&params, tol)?;
            println!("F_small: {:.15}", small.value);
            println!("F_contribution: {:.15}", full.value);
            println!("error_bound: {:.3e}", full.error_bound);
            Ok(ExitCode::SUCCESS)
        }
        Command::Defect { chi, sigma, n_plus, p_sq, d } => {
            let data = defect::CoboundaryData { chi, sigma, n_plus, p_sq, p1_sq: None, d };
            let mu = defect::eells_kuiper_mu(&data)?;
            let nu = defect::nu_invariant(chi, n_plus, sigma);
            let xi = defect::xi_invariant(&data)?;
            println!("mu: {mu}");
            println!("nu: {nu}");
            let (xi_val, xi_desc) = match xi {
                defect::XiValue::Integer(v) => (v, format!("{v} (exact integer)")),
                defect::XiValue::Residue(r) => (r.value as i64, r.to_string()),
            };
            println!("xi: {xi_desc}");
            let rel13 = defect::relation_13_check(xi_val, nu.value as i64);
            println!("relation xi = 7 nu (mod 12): {}", if rel13 { "pass" } else { "FAIL" });
            let mut all = rel13;
            if rel13 && d > 0 {
                let rec = defect::mu_recovery(xi_val, nu.value as i64, d)?;
                let consistent = rec == mu;
                println!(
                    "mu recovery (xi - 7 nu)/12: {rec} -> {}",
                    if consistent { "pass" } else { "FAIL" }
                );
                all = all && consistent;
            }
            println!("g2_nullbordant: {}", defect::g2_bordism_check(&nu));
            Ok(if all { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::RenderTorus { gluing, output, s_plus, s_minus } => {
            let g = load_gluing(&gluing)?;
            let geom = g.derive()?;
            let ratios = match (s_plus, s_minus) {
                (Some(a), Some(b)) => Some((a, b)),
                _ => None,
            };
            let fig = torus_figure(&g, &geom, ratios)?;
            std::fs::write(&output, fig.to_svg())?;
            println!("wrote {} (theta = {:.9})", output.display(), fig.theta);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn angles_desc(angles: &[etcs_core::ExactAngle]) -> String {
    let parts: Vec<String> = angles
        .iter()
        .map(|a| match a {
            etcs_core::ExactAngle::Zero => "0".to_string(),
            etcs_core::ExactAngle::Pi { sign } => {
                if *sign >= 0 { "pi".to_string() } else { "-pi".to_string() }
            }
            etcs_core::ExactAngle::Cos2 { value, sign } => {
                let v = value.to_f64().map(|t| (t / 2.0).acos()).unwrap_or(f64::NAN);
                format!("{}{v:.6} (2cos = {value})", if *sign >= 0 { "+" } else { "-" })
            }
            etcs_core::ExactAngle::Float { value } => format!("{value:.6}"),
        })
        .collect();
    parts.join(", ")
}
