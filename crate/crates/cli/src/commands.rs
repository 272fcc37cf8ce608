//! Command implementations. Every output is a pure function of the model
//! file, seed and flags, except the wall time recorded in functional.json.

use std::fs;
use std::path::{Path, PathBuf};

use eigenmoduli_core::moduli::{
    compute_functional, symbolic_jacobian, FunctionalConfig, FunctionalDocument, Principality,
    FUNCTIONAL_FORMAT,
};
use eigenmoduli_core::oracle::{
    draw_lambdas, eigen_points, sample_moduli, trace_boundary, verify_cokernel,
    verify_normal_vector, verify_uncertainty, verify_variational_bound, verify_variety,
};
use eigenmoduli_core::{eigh, CoreError, FamilyKind, HamiltonianFamily};
use eigenmoduli_poly::io::{parse_rational, to_text};
use eigenmoduli_poly::PolyError;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use crate::model::{load_model, Model};
use crate::{CliError, Command, FunctionalArgs, SampleArgs, SamplingArgs, SpectrumArgs, VerifyArgs};

/// Offset separating the parameter-draw stream from the state-sampling streams.
pub const LAMBDA_SEED_OFFSET: u64 = 0x9e37_79b9_7f4a_7c15;

/// Largest random-state count used by the Jacobian rank check.
const COKERNEL_RANDOM_STATES: usize = 1000;

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Functional(a) => cmd_functional(&a),
        Command::Sample(a) => cmd_sample(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Spectrum(a) => cmd_spectrum(&a),
    }
}

fn prepare_out(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", dir.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Failed(format!("serialization failed: {e}")))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn lambdas_for(family: &HamiltonianFamily, s: &SamplingArgs) -> Vec<Vec<f64>> {
    draw_lambdas(
        family.size(),
        s.lambda_grid.count,
        s.lambda_grid.range,
        s.seed ^ LAMBDA_SEED_OFFSET,
    )
}

pub fn cmd_functional(args: &FunctionalArgs) -> Result<(), CliError> {
    let model = load_model(&args.common.model)?;
    let family = model.family()?;
    prepare_out(&args.common.out)?;
    let config = FunctionalConfig {
        step_budget: args.budget,
        rationalize: !args.radical_symbols,
    };
    let result = match compute_functional(&family, &config) {
        Ok(r) => r,
        Err(CoreError::Poly(PolyError::BudgetExceeded(stats))) => {
            let path = args.common.out.join("functional_budget.json");
            write_json(
                &path,
                &json!({ "error": "step budget exceeded", "budget": args.budget, "stats": stats }),
            )?;
            return Err(CliError::Failed(format!(
                "step budget {} exceeded: {stats}; statistics in {}",
                args.budget,
                path.display()
            )));
        }
        Err(e @ CoreError::NonExactFamily(_)) => return Err(CliError::Usage(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    let doc = result.to_document()?;
    write_json(&args.common.out.join("functional.json"), &doc)?;
    if let Some(f) = &result.principal {
        fs::write(args.common.out.join("functional.txt"), to_text(f, &result.labels))?;
    }

    let status = match result.principality {
        Principality::Principal => "principal",
        Principality::CommonFactor => "non-principal (common factor designated)",
        Principality::NonPrincipal => "non-principal",
    };
    let degree = result
        .degree
        .map_or_else(|| "no designated relation".to_string(), |d| format!("degree {d}"));
    let homogeneous = if result.homogeneous {
        "homogeneous"
    } else {
        "inhomogeneous"
    };
    println!("{degree}, {homogeneous}, {status}");
    println!(
        "generators: {}; minors: {}; variables: {}",
        result.generators.len(),
        result.minors,
        result.labels.join(", ")
    );
    println!("elimination: {} in {:.1} ms", result.stats, result.wall_time_ms);
    if result.squarefree_reduced {
        println!("note: repeated factors removed from the designated relation");
    }
    match result.principality {
        Principality::Principal => Ok(()),
        _ => Err(CliError::Failed(format!(
            "elimination ideal is {status}; artifacts written"
        ))),
    }
}

pub fn cmd_sample(args: &SampleArgs) -> Result<(), CliError> {
    if args.sampling.samples == 0 {
        return Err(CliError::Usage("--samples must be positive".into()));
    }
    let model = load_model(&args.common.model)?;
    let family = model.family()?;
    prepare_out(&args.common.out)?;
    let labels = family.labels().to_vec();
    let coords = eigenmoduli_core::moduli::coordinate_labels(&family);
    let lambdas = lambdas_for(&family, &args.sampling);

    let cloud = sample_moduli(&family, args.sampling.samples, args.sampling.seed)?;
    let mut w = csv::Writer::from_path(args.common.out.join("cloud.csv"))?;
    let mut header = vec!["kind".to_string(), "index".into(), "branch".into()];
    header.extend(coords.iter().cloned());
    w.write_record(&header)?;
    for (i, p) in cloud.iter().enumerate() {
        let mut row = vec!["sample".to_string(), i.to_string(), String::new()];
        row.extend(p.rho.iter().map(|x| x.to_string()));
        w.write_record(&row)?;
    }
    let mut branch_rows = 0;
    for (li, l) in lambdas.iter().enumerate() {
        let e = eigen_points(&family, l)?;
        for (k, p) in e.points.iter().enumerate() {
            let mut row = vec!["eigen".to_string(), li.to_string(), k.to_string()];
            row.extend(p.rho.iter().map(|x| x.to_string()));
            w.write_record(&row)?;
            branch_rows += 1;
        }
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(args.common.out.join("lambdas.csv"))?;
    let mut header = vec!["index".to_string()];
    header.extend(labels.iter().cloned());
    w.write_record(&header)?;
    for (i, l) in lambdas.iter().enumerate() {
        let mut row = vec![i.to_string()];
        row.extend(l.iter().map(|x| x.to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    println!(
        "wrote {} cloud rows and {branch_rows} branch rows to {}",
        cloud.len(),
        args.common.out.join("cloud.csv").display()
    );

    let dimer = matches!(family.kind(), FamilyKind::Dft { sites: 2, .. });
    if dimer {
        let trace = trace_boundary(&family, args.trace_points, model.spec())?;
        let mut w = csv::Writer::from_path(args.common.out.join("trace.csv"))?;
        w.write_record(["branch", "delta_v", "delta_n", "F", "theta"])?;
        for branch in &trace.branches {
            for p in branch {
                w.write_record([
                    p.branch.to_string(),
                    p.delta_v.to_string(),
                    p.delta_n.to_string(),
                    p.f.to_string(),
                    p.theta.to_string(),
                ])?;
            }
        }
        w.flush()?;
        write_json(
            &args.common.out.join("trace.json"),
            &json!({
                "samples": trace.samples,
                "cusps": trace.cusps,
                "ground_curvature": trace.ground_curvature,
            }),
        )?;
        for c in &trace.cusps {
            let dv = c.delta_v.map_or("±inf".to_string(), |v| format!("{v:.6}"));
            println!(
                "cusp on loop {}: branch {} at ΔV = {dv}, Δn = {:.6}, F = {:.6}",
                c.loop_branch, c.branch, c.delta_n, c.f
            );
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    passed: bool,
    details: Value,
}

fn load_functional(path: &Path) -> Result<FunctionalDocument, CliError> {
    let text = fs::read_to_string(path).map_err(|e| {
        CliError::Usage(format!("cannot read functional document {}: {e}", path.display()))
    })?;
    let doc: FunctionalDocument = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("malformed functional document: {e}")))?;
    if doc.format != FUNCTIONAL_FORMAT {
        return Err(CliError::Usage(format!(
            "unsupported functional format {:?}",
            doc.format
        )));
    }
    Ok(doc)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    if args.sampling.samples == 0 {
        return Err(CliError::Usage("--samples must be positive".into()));
    }
    let tol = args.tolerances.resolve()?;
    let model = load_model(&args.common.model)?;
    let family = model.family()?;
    prepare_out(&args.common.out)?;
    let mut checks = Vec::new();

    match &model {
        Model::Oscillator { .. } => {
            let r = verify_uncertainty(&family, args.sampling.samples, args.sampling.seed, &tol)?;
            checks.push(Check {
                name: "uncertainty",
                passed: r.passed,
                details: to_value(&r),
            });
        }
        Model::Dft(_) => {
            let path: PathBuf = args
                .functional
                .clone()
                .unwrap_or_else(|| args.common.out.join("functional.json"));
            let doc = load_functional(&path)?;
            let f = doc
                .principal_poly()
                .map_err(|e| CliError::Usage(format!("functional document: {e}")))?
                .ok_or_else(|| {
                    CliError::Failed("functional document designates no relation".into())
                })?;
            if f.arity() != family.size() {
                return Err(CliError::Usage(format!(
                    "functional has {} variables but the model family has {} members",
                    f.arity(),
                    family.size()
                )));
            }
            let lambdas = lambdas_for(&family, &args.sampling);
            let samples = sample_moduli(&family, args.sampling.samples, args.sampling.seed)?;

            let r = verify_variety(&f, &family, &lambdas, &samples, &tol)?;
            checks.push(Check {
                name: "variety",
                passed: r.membership_passed,
                details: to_value(&r),
            });
            checks.push(Check {
                name: "separation",
                passed: r.separation_passed,
                details: json!({
                    "random_points": r.random_points,
                    "separated_fraction": r.separated_fraction,
                    "threshold": tol.separation,
                    "required_fraction": tol.separation_fraction,
                    "min_random_residual": r.min_random_residual,
                    "median_random_residual": r.median_random_residual,
                }),
            });
            let r = verify_variational_bound(&family, &lambdas, &samples, &tol)?;
            checks.push(Check {
                name: "variational-bound",
                passed: r.passed,
                details: to_value(&r),
            });
            let r = verify_normal_vector(&f, &family, &lambdas, &tol)?;
            checks.push(Check {
                name: "normal-vector",
                passed: r.passed,
                details: to_value(&r),
            });
            let jac = symbolic_jacobian(&family)?;
            let r = verify_cokernel(
                &jac,
                &family,
                &lambdas,
                args.sampling.samples.min(COKERNEL_RANDOM_STATES),
                args.sampling.seed,
                &tol,
            )?;
            checks.push(Check {
                name: "cokernel",
                passed: r.passed,
                details: to_value(&r),
            });
        }
    }

    let passed = checks.iter().all(|c| c.passed);
    write_json(
        &args.common.out.join("report.json"),
        &json!({
            "model": family.descriptor(),
            "seed": args.sampling.seed,
            "samples": args.sampling.samples,
            "lambda_grid": { "count": args.sampling.lambda_grid.count, "range": args.sampling.lambda_grid.range },
            "tolerances": tol,
            "checks": checks,
            "passed": passed,
        }),
    )?;
    for c in &checks {
        println!("{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
    }
    if passed {
        Ok(())
    } else {
        Err(CliError::Failed("verification failed; see report.json".into()))
    }
}

fn parse_lambda(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .or_else(|| parse_rational(t).and_then(|r| r.to_f64()))
                .ok_or_else(|| CliError::Usage(format!("cannot parse parameter {t:?}")))
        })
        .collect()
}

pub fn cmd_spectrum(args: &SpectrumArgs) -> Result<(), CliError> {
    let model = load_model(&args.model)?;
    let family = model.family()?;
    let lambda = parse_lambda(&args.lambda)?;
    if lambda.len() != family.size() {
        return Err(CliError::Usage(format!(
            "expected {} parameters ({}), got {}",
            family.size(),
            family.labels().join(", "),
            lambda.len()
        )));
    }
    let spec = eigh(&family.assemble(&lambda)?)?;
    for (e, d) in spec.eigenvalues.iter().zip(&spec.degenerate) {
        if *d {
            println!("{e} degenerate");
        } else {
            println!("{e}");
        }
    }
    if let Some(dir) = &args.out {
        prepare_out(dir)?;
        write_json(
            &dir.join("spectrum.json"),
            &json!({
                "lambda": lambda,
                "eigenvalues": spec.eigenvalues,
                "degenerate": spec.degenerate,
                "sweeps": spec.sweeps,
            }),
        )?;
    }
    Ok(())
}
