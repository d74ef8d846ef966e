use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use nctorus_core::existence::{relation_search, SearchBounds};
use nctorus_core::fit::PowerLaw;
use nctorus_core::matrix_rep::ClockShiftRep;
use nctorus_core::su2::{closed_form_action, EulerPoint, HaarGrid, PHI_MAX, PSI_MAX, THETA_MAX};
use nctorus_core::symbolic::{validate_sl2_morphism, NCPoly, QPhase, TorusMorphism};
use nctorus_core::thermo::{
    extremize, linspace, Abscissa, ActionTable, ExtremizeOptions, ThermoCurve, ThermoRow,
};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::{
    ActionArgs, Angle, CliError, Command, ExistenceArgs, ExtremizeArgs, Format, ScanArgs,
    TableFormat, ThermoArgs,
};

pub const SCHEMA_VERSION: u32 = 1;
/// `(√5 − 1)/2`.
pub const DEFAULT_THETA: f64 = 0.618_033_988_749_894_8;
pub const DEFAULT_GRID: usize = 32;
pub const DEFAULT_R_START: f64 = 1.0;
pub const DEFAULT_R_STOP: f64 = 3.0;
pub const DEFAULT_R_COUNT: usize = 20;

type Result<T> = std::result::Result<T, CliError>;

pub fn run(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Action(args) => cmd_action(&args, out),
        Command::Thermo(args) => cmd_thermo(&args, out),
        Command::Scan(args) => cmd_scan(&args, out),
        Command::Extremize(args) => cmd_extremize(&args, out),
        Command::Existence(args) => cmd_existence(&args, out),
        Command::PrintConfig => print_config(out),
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Debug, Deserialize)]
struct MorphismFile {
    theta_source: f64,
    image_u: NCPoly,
    image_v: NCPoly,
}

fn cmd_action(args: &ActionArgs, out: &mut dyn Write) -> Result<()> {
    if let Some(m) = &args.sl2 {
        let (p, q, r, s) = (m[0], m[1], m[2], m[3]);
        if !validate_sl2_morphism(p, q, r, s) {
            return Err(CliError::Usage(format!(
                "({p}, {q}, {r}, {s}) has determinant {}, expected 1",
                p * s - q * r
            )));
        }
        let phi = TorusMorphism::<QPhase>::from_matrix(args.theta, p, q, r, s)?;
        let value = phi.action()?;
        let norm = p * p + q * q + r * r + s * s;
        match args.format {
            Format::Text => {
                writeln!(out, "action: {value}")?;
                writeln!(
                    out,
                    "exact: 4π²({p}² + {q}² + {r}² + {s}²) = {}π²",
                    4 * norm
                )?;
            }
            Format::Json => write_json(
                out,
                &json!({
                    "schema_version": SCHEMA_VERSION,
                    "kind": "sl2",
                    "matrix": [p, q, r, s],
                    "theta": args.theta,
                    "action": value,
                    "pi_squared_coefficient": 4 * norm,
                }),
            )?,
        }
        return Ok(());
    }

    if let Some(angles) = &args.euler {
        let point = EulerPoint::new(angles[0], angles[1], angles[2])?;
        let value = closed_form_action(&point, args.r)?;
        let direct = ClockShiftRep::new(2, args.r)?.conj_action(&point.matrix())?;
        match args.format {
            Format::Text => {
                writeln!(out, "action: {value}")?;
                writeln!(out, "matrix_trace: {direct}")?;
            }
            Format::Json => write_json(
                out,
                &json!({
                    "schema_version": SCHEMA_VERSION,
                    "kind": "euler",
                    "angles": {"phi": point.phi, "theta": point.theta, "psi": point.psi},
                    "r": args.r,
                    "action": value,
                    "matrix_trace": direct,
                }),
            )?,
        }
        return Ok(());
    }

    if let Some(path) = &args.images {
        let text = fs::read_to_string(path)?;
        let spec: MorphismFile = serde_json::from_str(&text)?;
        let phi = TorusMorphism::new(spec.theta_source, spec.image_u, spec.image_v)?;
        let value = phi.action()?;
        let well_defined = phi.is_well_defined(1e-12);
        match args.format {
            Format::Text => {
                writeln!(out, "action: {value}")?;
                let verdict = match well_defined {
                    Some(true) => "yes",
                    Some(false) => "no",
                    None => "unchecked (non-monomial images)",
                };
                writeln!(out, "well_defined: {verdict}")?;
            }
            Format::Json => write_json(
                out,
                &json!({
                    "schema_version": SCHEMA_VERSION,
                    "kind": "images",
                    "action": value,
                    "well_defined": well_defined,
                }),
            )?,
        }
        return Ok(());
    }

    Err(CliError::Usage(
        "one of --sl2, --euler or --images is required".into(),
    ))
}

#[derive(Debug, Serialize)]
struct ThermoConfig {
    grid: [usize; 3],
    r_start: f64,
    r_stop: f64,
    r_count: usize,
    step_rel: f64,
}

#[derive(Debug, Serialize)]
struct ThermoSummary {
    schema_version: u32,
    config: ThermoConfig,
    fits: ThermoFits,
}

#[derive(Debug, Serialize)]
struct ThermoFits {
    #[serde(rename = "E_abs")]
    e_abs: Option<PowerLaw>,
    #[serde(rename = "varE_paper")]
    var_e_literal: Option<PowerLaw>,
    #[serde(rename = "varE_std")]
    var_e_std: Option<PowerLaw>,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn cmd_thermo(args: &ThermoArgs, out: &mut dyn Write) -> Result<()> {
    if args.r_count < 2 {
        return Err(CliError::Usage(format!(
            "--r-count must be at least 2, got {}",
            args.r_count
        )));
    }
    if !(args.r_start > 0.0 && args.r_start < args.r_stop) {
        return Err(CliError::Usage(format!(
            "need 0 < r-start < r-stop, got [{}, {}]",
            args.r_start, args.r_stop
        )));
    }
    if !(args.step_rel > 0.0 && args.step_rel < 1.0) {
        return Err(CliError::Usage(format!(
            "--step-rel must lie in (0, 1), got {}",
            args.step_rel
        )));
    }
    let g = &args.grid.grid;
    let grid = HaarGrid::new(g[0], g[1], g[2])?;
    let table = ActionTable::new(&grid)?;
    let rs = linspace(args.r_start, args.r_stop, args.r_count);
    let rows = table.sweep(&rs, args.step_rel)?;

    fs::create_dir_all(&args.out_dir)
        .map_err(|e| CliError::Io(format!("{}: {e}", args.out_dir.display())))?;
    match args.format {
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(create(&args.out_dir.join("thermo.csv"))?);
            for row in &rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        TableFormat::Json => {
            let mut w = create(&args.out_dir.join("thermo.json"))?;
            write_json(
                &mut w,
                &json!({"schema_version": SCHEMA_VERSION, "rows": rows}),
            )?;
            w.flush()?;
        }
    }

    let curve = |f: fn(&ThermoRow) -> f64| -> Result<Option<PowerLaw>> {
        let pts = rows.iter().map(|row| (row.r, f(row))).collect();
        Ok(ThermoCurve::new(Abscissa::R, pts)?.fit)
    };
    let summary = ThermoSummary {
        schema_version: SCHEMA_VERSION,
        config: ThermoConfig {
            grid: [g[0], g[1], g[2]],
            r_start: args.r_start,
            r_stop: args.r_stop,
            r_count: args.r_count,
            step_rel: args.step_rel,
        },
        fits: ThermoFits {
            e_abs: curve(|row| row.e_abs)?,
            var_e_literal: curve(|row| row.var_e_literal)?,
            var_e_std: curve(|row| row.var_e_std)?,
        },
    };
    let mut w = create(&args.out_dir.join("thermo_summary.json"))?;
    write_json(&mut w, &summary)?;
    w.flush()?;

    if let Some(path) = &args.dump_grid {
        let mut w = csv::Writer::from_writer(create(path)?);
        for p in grid.points() {
            w.serialize(p)?;
        }
        w.flush()?;
    }

    write_json(out, &summary)
}

fn angle_info(a: Angle) -> (&'static str, f64) {
    match a {
        Angle::Phi => ("phi", PHI_MAX),
        Angle::Theta => ("theta", THETA_MAX),
        Angle::Psi => ("psi", PSI_MAX),
    }
}

fn cmd_scan(args: &ScanArgs, out: &mut dyn Write) -> Result<()> {
    if args.points < 2 {
        return Err(CliError::Usage(format!(
            "--points must be at least 2, got {}",
            args.points
        )));
    }
    let (_, fixed_max) = angle_info(args.fixed);
    if !(0.0..=fixed_max).contains(&args.value) {
        return Err(CliError::Usage(format!(
            "fixed angle {} outside [0, {fixed_max}]",
            args.value
        )));
    }
    let swept: Vec<Angle> = [Angle::Phi, Angle::Theta, Angle::Psi]
        .into_iter()
        .filter(|&a| a != args.fixed)
        .collect();
    let (name_a, max_a) = angle_info(swept[0]);
    let (name_b, max_b) = angle_info(swept[1]);

    let sink: Box<dyn Write + '_> = match &args.out {
        Some(path) => Box::new(create(path)?),
        None => Box::new(&mut *out),
    };
    let mut w = csv::Writer::from_writer(sink);
    w.write_record([name_a, name_b, "S"])?;
    for a in linspace(0.0, max_a, args.points) {
        for b in linspace(0.0, max_b, args.points) {
            let mut angles = [0.0; 3];
            angles[args.fixed as usize] = args.value;
            angles[swept[0] as usize] = a;
            angles[swept[1] as usize] = b;
            let p = EulerPoint::new(angles[0], angles[1], angles[2])?;
            let s = closed_form_action(&p, args.r)?;
            w.write_record([a.to_string(), b.to_string(), s.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn cmd_extremize(args: &ExtremizeArgs, out: &mut dyn Write) -> Result<()> {
    let opts = ExtremizeOptions {
        scan: args.scan,
        seeds: args.seeds,
        ..Default::default()
    };
    let e = extremize(args.r, &opts)?;
    write_json(
        out,
        &json!({
            "schema_version": SCHEMA_VERSION,
            "r": args.r,
            "min": e.min,
            "argmin": {"phi": e.argmin.phi, "theta": e.argmin.theta, "psi": e.argmin.psi},
            "max": e.max,
            "argmax": {"phi": e.argmax.phi, "theta": e.argmax.theta, "psi": e.argmax.psi},
            "converged": e.converged,
        }),
    )
}

fn cmd_existence(args: &ExistenceArgs, out: &mut dyn Write) -> Result<()> {
    let bounds = SearchBounds {
        n_max: args.n_max,
        c_max: args.c_max,
        d_max: args.d_max,
    };
    let hits = relation_search(args.big_theta, args.theta, bounds, args.tol)?;
    write_json(
        out,
        &json!({
            "schema_version": SCHEMA_VERSION,
            "big_theta": args.big_theta,
            "theta": args.theta,
            "bounds": bounds,
            "tol": args.tol,
            "hits": hits,
        }),
    )
}

fn print_config(out: &mut dyn Write) -> Result<()> {
    let ext = ExtremizeOptions::default();
    write_json(
        out,
        &json!({
            "schema_version": SCHEMA_VERSION,
            "theta": DEFAULT_THETA,
            "grid": [DEFAULT_GRID, DEFAULT_GRID, DEFAULT_GRID],
            "r_range": {"start": DEFAULT_R_START, "stop": DEFAULT_R_STOP, "count": DEFAULT_R_COUNT},
            "step_rel": nctorus_core::thermo::DEFAULT_STEP_REL,
            "extremize": ext,
            "existence": {
                "n_max": 10, "c_max": 10, "d_max": 20,
                "tol": nctorus_core::existence::DEFAULT_TOL,
            },
            "scan": {"points": 101},
            "tolerances": {
                "action_imag": nctorus_core::symbolic::ACTION_IMAG_TOL,
                "closed_form_imag": nctorus_core::su2::CLOSED_FORM_IMAG_TOL,
                "unitarity": nctorus_core::matrix_rep::UNITARITY_TOL,
            },
        }),
    )
}
