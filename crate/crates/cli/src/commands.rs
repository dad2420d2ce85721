use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use ihara_core::dihedral::{build_blocks, build_dihedral_setup, dihedral_zeta_factors};
use ihara_core::graph::IntMatrix;
use ihara_core::io::{graph_to_json, parse_covering, parse_graph, parse_voltage, parse_voltage_map, VoltageJson};
use ihara_core::towers::{
    certify_strong_convergence, grigorchuk_log_zeta, normalized_log_zeta, schreier_tower, Automaton,
    IntegrandReading, LimitModel, LineLimit, SchreierConvention, SchreierLimit, SeriesConfig, Tower,
    DEFAULT_MAX_DEPTH,
};
use ihara_core::voltage::{
    build_bundle, cover_to_bundle, decomposed_adjacency, group_decomposed_adjacency, VoltageAssignment,
};
use ihara_core::zeta::{
    bass_determinant, closed_geodesic_counts, evaluate_zeta_inverse, primitive_cycle_oracle, quadratic_determinant,
    zeta_inverse, IntPolynomial, ValidRadius, ZetaConfig,
};
use ihara_core::Error;

use crate::manifest::{complex_value, int_value, json_report, CliError, Output, RunManifest};
use crate::{BundleArgs, Convention, DihedralArgs, Emit, Preset, TowerArgs, ZetaArgs};

/// Level from which successive tower differences are expected to shrink.
const SHRINK_FROM: usize = 6;

fn poly_value(p: &IntPolynomial) -> Value {
    Value::Array(p.coefficients().iter().map(|c| int_value(c.to_string())).collect())
}

fn radius_value(r: &ValidRadius) -> Value {
    match r {
        ValidRadius::Finite(q) => json!(format!("{}/{}", q.numer(), q.denom())),
        ValidRadius::Unbounded => json!("inf"),
    }
}

pub fn zeta(args: &ZetaArgs) -> Result<Output, CliError> {
    let mut manifest = RunManifest::new("zeta");
    let g = parse_graph(&manifest.read_input("graph", &args.graph)?)?;
    manifest.flag("series_order", args.series_order);
    manifest.flag("oracle_max_len", args.oracle_max_len);
    manifest.flag("eval", &args.eval);
    manifest.flag("node_budget", args.node_budget);

    let zr = zeta_inverse(&g, &ZetaConfig::from_env())?;
    let counts = closed_geodesic_counts(&g, args.series_order.max(1))?;
    let mut result = json!({
        "vertices": g.vertex_count(),
        "darts": g.dart_count(),
        "hashimoto_det": poly_value(&zr.hashimoto_det),
        "bass_det": poly_value(&zr.bass_det),
        "bass_exponent": zr.bass_exponent,
        "has_half_loops": zr.has_half_loops,
        "bass_identity": (!zr.has_half_loops).then(|| zr.bass_identity_holds()),
        "valid_radius": radius_value(&zr.valid_radius),
        "N": counts.iter().map(|c| int_value(c.to_string())).collect::<Vec<_>>(),
    });
    let mut summary = format!(
        "zeta: {} vertices, {} darts, deg det(I - zT) = {}",
        g.vertex_count(),
        g.dart_count(),
        zr.hashimoto_det.degree().unwrap_or(0)
    );
    if let Some(max_len) = args.oracle_max_len {
        let census = primitive_cycle_oracle(&g, max_len, args.node_budget)?;
        let agrees = max_len == 0
            || (census.closed_geodesic_counts() == closed_geodesic_counts(&g, max_len)?
                && census.matches_up_to_order(&zr.hashimoto_det));
        let class_counts: BTreeMap<String, u64> = census.counts.iter().map(|(l, c)| (l.to_string(), *c)).collect();
        result["oracle_class_counts"] = json!(class_counts);
        result["oracle_agrees"] = json!(agrees);
        let _ = write!(summary, "; cycle census to length {max_len} agrees: {agrees}");
    }
    if let Some(z) = &args.eval {
        let z = Complex64::new(z[0], z[1]);
        let e = evaluate_zeta_inverse(&zr, z);
        result["eval"] = json!({
            "z": complex_value(z),
            "zeta_inverse": complex_value(e.value),
            "inside_radius": e.inside_radius,
        });
        let _ = write!(summary, "; 1/zeta({z}) = {}", e.value);
    }
    Ok(Output {
        body: json_report(&manifest, result),
        summary,
        failure: None,
    })
}

fn max_abs_difference(a: &IntMatrix, b: &IntMatrix) -> i64 {
    if a.shape() != b.shape() {
        return i64::MAX;
    }
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).max().unwrap_or(0)
}

pub fn bundle(args: &BundleArgs) -> Result<Output, CliError> {
    let mut manifest = RunManifest::new("bundle");
    manifest.flag("build", args.build);
    manifest.flag("decompose_check", args.decompose_check);
    let mut result = json!({});
    let mut summary = Vec::new();
    let mut failure = None;

    if let Some(path) = &args.voltage {
        let va = parse_voltage(&manifest.read_input("voltage", path)?)?;
        let b = build_bundle(&va);
        if args.build || !args.decompose_check {
            let total: Value = serde_json::from_str(&graph_to_json(&b.total)).expect("graph JSON is valid");
            result["bundle"] = json!({
                "vertices": b.total.vertex_count(),
                "darts": b.total.dart_count(),
                "graph": total,
            });
            summary.push(format!("bundle: {} vertices, {} darts", b.total.vertex_count(), b.total.dart_count()));
        }
        if args.decompose_check {
            let deviation = max_abs_difference(&decomposed_adjacency(&va), &b.total.adjacency_matrix());
            result["decompose_check"] = json!({
                "distinct_voltages": va.distinct_voltages().len(),
                "max_entry_deviation": deviation,
            });
            summary.push(format!("decomposition: max entry deviation {deviation}"));
            if deviation != 0 {
                failure = Some(CliError::Core(Error::NonConvergence(format!(
                    "decomposed adjacency deviates by {deviation}"
                ))));
            }
        }
    } else if args.cover_to_bundle.is_none() {
        return Err(Error::InvalidInput("bundle needs a voltage file or --cover-to-bundle".into()).into());
    }

    if let Some(path) = &args.cover_to_bundle {
        let (p, gens) = parse_covering(&manifest.read_input("covering", path)?)?;
        let cb = cover_to_bundle(&p, &gens)?;
        let va: &VoltageAssignment = &cb.bundle.voltage;
        let group_sum = group_decomposed_adjacency(va)?;
        let q = p.target.degree_matrix_q().kronecker(&IntMatrix::identity(cb.group.len(), cb.group.len()));
        let from_group = quadratic_determinant(&group_sum, &q)?;
        let from_cover = bass_determinant(&p.source);
        let isomorphic = cb.isomorphism.validate().is_ok() && cb.isomorphism.sheets() == 1;
        let voltages: Value = serde_json::to_value(VoltageJson::from(va)).expect("voltage JSON is valid");
        result["cover_to_bundle"] = json!({
            "group_order": cb.group.len(),
            "representatives": cb.representatives,
            "voltage": voltages,
            "isomorphism": {
                "vertex_map": cb.isomorphism.vertex_map,
                "dart_map": cb.isomorphism.dart_map,
                "valid": isomorphic,
            },
            "group_bass_det": poly_value(&from_group),
            "cover_bass_det": poly_value(&from_cover),
            "bass_det_equal": from_group == from_cover,
        });
        summary.push(format!(
            "cover to bundle: deck group of order {}, isomorphism valid: {isomorphic}, determinants equal: {}",
            cb.group.len(),
            from_group == from_cover
        ));
        if !isomorphic || from_group != from_cover {
            failure = Some(CliError::Core(Error::NonConvergence(
                "reconstructed bundle does not match the cover".into(),
            )));
        }
    }
    Ok(Output {
        body: json_report(&manifest, result),
        summary: summary.join("\n"),
        failure,
    })
}

pub fn dihedral(args: &DihedralArgs) -> Result<Output, CliError> {
    let mut manifest = RunManifest::new("dihedral");
    let base = parse_graph(&manifest.read_input("base", &args.base)?)?;
    let (n, set) = args.fiber_circulant.split_first().expect("clap requires two values");
    manifest.flag("fiber_circulant", &args.fiber_circulant);
    manifest.flag("samples", args.samples);
    manifest.flag("tolerance", args.tolerance);
    manifest.seed = Some(args.seed);

    let setup = build_dihedral_setup(*n, set)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let va = match &args.voltages {
        Some(path) => {
            let map: BTreeMap<String, Vec<usize>> = serde_json::from_str(&manifest.read_input("voltages", path)?)
                .map_err(Error::from)?;
            VoltageAssignment::from_partial(base.clone(), setup.fiber.clone(), &parse_voltage_map(&map)?)?
        }
        None => setup.random_voltages(&base, &mut rng),
    };
    let fact = build_blocks(&setup, &va)?;
    let total = build_bundle(&va).total;
    let exact = zeta_inverse(&total, &ZetaConfig::from_env())?;
    let radius = fact.disc_radius();

    let mut samples = Vec::with_capacity(args.samples);
    let mut max_residual: f64 = 0.0;
    for _ in 0..args.samples {
        let r = if radius.is_finite() { radius } else { 1.0 };
        let z = Complex64::from_polar(r * rng.gen_range(0.0..0.99), rng.gen_range(0.0..TAU));
        let fz = dihedral_zeta_factors(&fact, z);
        let reference = exact.hashimoto_det.eval(z);
        let residual = (fz.assembled - reference).norm();
        max_residual = max_residual.max(residual);
        samples.push(json!({
            "z": complex_value(z),
            "f": complex_value(fz.f),
            "g": fz.g.iter().map(|&x| complex_value(x)).collect::<Vec<_>>(),
            "h": fz.h.map(complex_value),
            "assembled": complex_value(fz.assembled),
            "exact": complex_value(reference),
            "residual": residual,
        }));
    }
    let voltages: Vec<String> = va
        .voltages()
        .iter()
        .map(|p| setup.identify(p).map_or_else(|| p.to_string(), |e| e.to_string()))
        .collect();
    let pass = max_residual < args.tolerance;
    let result = json!({
        "n": setup.n,
        "connection_set": setup.connection_set,
        "lambdas": (0..setup.n).map(|k| setup.lambda(k)).collect::<Vec<_>>(),
        "voltages": voltages,
        "factor_count": 1 + setup.pair_count() + usize::from(setup.n % 2 == 0),
        "block_residual": fact.block_residual(),
        "disc_radius": if radius.is_finite() { json!(radius) } else { json!("inf") },
        "bass_exponent": fact.bass_exponent(),
        "samples": samples,
        "max_residual": max_residual,
        "pass": pass,
    });
    let summary = format!(
        "dihedral: D_{} over {} base vertices, {} samples, max residual {max_residual:e} (tolerance {:e})",
        setup.n,
        base.vertex_count(),
        args.samples,
        args.tolerance
    );
    Ok(Output {
        body: json_report(&manifest, result),
        summary,
        failure: (!pass).then(|| {
            CliError::Core(Error::NonConvergence(format!(
                "factor product residual {max_residual:e} exceeds {:e}",
                args.tolerance
            )))
        }),
    })
}

fn parse_z(text: &str) -> Result<Complex64, CliError> {
    text.trim()
        .parse::<Complex64>()
        .map_err(|_| Error::InvalidInput(format!("cannot parse sample point {text:?}")).into())
}

pub fn tower(args: &TowerArgs) -> Result<Output, CliError> {
    let mut manifest = RunManifest::new("tower");
    let preset = match args.preset {
        Preset::Grigorchuk => "grigorchuk",
        Preset::Cycles => "cycles",
    };
    let convention = match args.convention {
        Convention::HalfLoops => SchreierConvention::HalfLoops,
        Convention::Doubled => SchreierConvention::Doubled,
    };
    manifest.flag("preset", preset);
    manifest.flag("depth", args.depth);
    manifest.flag("series_order", args.series_order);
    manifest.flag("z", &args.z);
    manifest.flag("tolerance", args.tolerance);
    manifest.flag("max_radius", args.max_radius);
    match args.preset {
        Preset::Grigorchuk => {
            manifest.flag("convention", format!("{convention:?}"));
            manifest.flag("integrand_raw", args.integrand_raw);
        }
        Preset::Cycles => manifest.flag("cycle_base", args.cycle_base),
    }
    let zs = args.z.iter().map(|t| parse_z(t)).collect::<Result<Vec<_>, _>>()?;
    if args.depth == 0 {
        return Err(Error::InvalidInput("depth must be at least 1".into()).into());
    }

    let (tower, limit): (Tower, Box<dyn LimitModel>) = match args.preset {
        Preset::Grigorchuk => {
            let automaton = Automaton::grigorchuk();
            let tower = schreier_tower(&automaton, args.depth, convention, DEFAULT_MAX_DEPTH)?;
            let limit = SchreierLimit {
                automaton,
                convention,
                first_level: 1,
            };
            (tower, Box::new(limit))
        }
        Preset::Cycles => (
            Tower::cycles(args.cycle_base, args.depth)?,
            Box::new(LineLimit { n: args.cycle_base }),
        ),
    };
    let certificate = certify_strong_convergence(&tower, limit.as_ref(), args.max_radius, None)?;
    let radii = certificate.radii();
    let config = SeriesConfig {
        order: args.series_order,
        tolerance: args.tolerance,
    };
    let series = normalized_log_zeta(&tower, &config, &zs)?;

    let mut groups = Vec::with_capacity(zs.len());
    for (zi, &z) in zs.iter().enumerate() {
        let (closed, raw) = match args.preset {
            Preset::Grigorchuk => (
                Some(grigorchuk_log_zeta(z, IntegrandReading::Logarithmic)?.value),
                if args.integrand_raw {
                    Some(grigorchuk_log_zeta(z, IntegrandReading::Raw)?.value)
                } else {
                    None
                },
            ),
            // ζ_{C_N}(z)^{-1} = (1 - z^N)², so the normalized logarithm tends to 0
            Preset::Cycles => (Some(Complex64::new(0.0, 0.0)), None),
        };
        let diffs = series.diffs(zi);
        let rows: Vec<Value> = series
            .levels
            .iter()
            .zip(&diffs)
            .zip(&radii)
            .map(|((l, d), r)| {
                json!({
                    "level": l.level,
                    "vertices": l.vertices,
                    "value": complex_value(l.values[zi]),
                    "diff_prev": d,
                    "certified_radius": r,
                    "tail_bound": l.tail_bounds[zi],
                })
            })
            .collect();
        let last = series.levels.last().expect("depth is positive").values[zi];
        groups.push(json!({
            "z": complex_value(z),
            "closed_form": closed.map(complex_value),
            "closed_form_error": closed.map(|c| (last - c).norm()),
            "raw_reading": raw.map(complex_value),
            "raw_reading_error": raw.map(|c| (last - c).norm()),
            "diffs_shrink": series.diffs_shrink_from(zi, SHRINK_FROM),
            "levels": rows,
        }));
    }

    let body = match args.emit {
        Emit::Json => json_report(
            &manifest,
            json!({
                "preset": preset,
                "depth": args.depth,
                "certified": certificate.is_certified(),
                "samples": groups,
            }),
        ),
        Emit::Csv => tower_csv(&manifest, &groups),
    };
    let summary = groups
        .iter()
        .map(|g| {
            format!(
                "tower {preset}: z = {}, closed-form error {}, diffs shrink from level {SHRINK_FROM}: {}",
                g["z"], g["closed_form_error"], g["diffs_shrink"]
            )
        })
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Output {
        body,
        summary,
        failure: None,
    })
}

fn csv_field(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Manifest as a comment line, then one `# z=` line and one block of rows per sample point.
fn tower_csv(manifest: &RunManifest, groups: &[Value]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# manifest {}", serde_json::to_string(manifest).expect("manifest serializes"));
    let _ = writeln!(out, "level,vertices,value_re,value_im,diff_prev,certified_radius");
    for g in groups {
        let _ = write!(out, "# z={},{}", g["z"][0], g["z"][1]);
        if let Some(c) = g["closed_form"].as_array() {
            let _ = write!(out, " closed_form={},{} closed_form_error={}", c[0], c[1], g["closed_form_error"]);
        }
        if let Some(c) = g["raw_reading"].as_array() {
            let _ = write!(out, " raw_reading={},{} raw_reading_error={}", c[0], c[1], g["raw_reading_error"]);
        }
        let _ = writeln!(out, " diffs_shrink={}", g["diffs_shrink"]);
        for row in g["levels"].as_array().expect("rows are an array") {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                row["level"],
                row["vertices"],
                row["value"][0],
                row["value"][1],
                csv_field(&row["diff_prev"]),
                csv_field(&row["certified_radius"])
            );
        }
    }
    out
}
