//! One handler per subcommand. Each returns the reports, a JSON payload and,
//! for Lyapunov runs, a flat table suitable for CSV.

use anyhow::{bail, ensure, Context, Result};
use serde::Serialize;
use serde_json::{json, Value as Json};

use itmlab::cocycles::{
    conjugation_suite, cnorm_ratio_check, order_suite, pf_constants, recursion_sequences, verify_column_growth,
};
use itmlab::constructions::{
    best_gamma, build_irrational, build_minus_one, gamma_eigen_residual, minus_one_residual, spacer_towers,
};
use itmlab::galois::galois_suite;
use itmlab::group::{steinberg_report, verify_commutation_relations};
use itmlab::lyapunov::{exponent_gap, second_exponent_sign, spectrum, top_exponent};
use itmlab::rational::{fmt_rat, parse_rat, parse_rat_list, rat_to_f64};
use itmlab::sadic::{tower_heights, tower_masses, tower_names_d, veech_components};
use itmlab::{
    BruinParams, BtParams, Check, Classification, Family, Itm, KSequence, LyapunovEstimate, Report, SamplingSpec, Value,
};

use crate::config::{
    ClassifyArgs, Command, ConstructArgs, Construction, DistKind, LyapunovArgs, LyapunovMode, Suite, TowersArgs,
    VeechArgs, VerifyArgs,
};

/// One row of a Lyapunov table.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub seed: u64,
    pub quantity: String,
    pub value: f64,
    pub ci95: Option<f64>,
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub reports: Vec<Report>,
    pub data: Json,
    pub table: Option<Vec<Row>>,
}

pub fn run(cmd: &Command, seed: u64) -> Result<Outcome> {
    match cmd {
        Command::Classify(a) => classify(a),
        Command::Verify(a) => verify(a, seed),
        Command::Lyapunov(a) => lyapunov(a, seed),
        Command::Construct(a) => construct(a, seed),
        Command::Towers(a) => towers(a),
        Command::Veech(a) => veech(a),
    }
}

fn classify(a: &ClassifyArgs) -> Result<Outcome> {
    let (map, params) = match (&a.alpha, &a.beta, &a.lambda) {
        (Some(al), Some(be), None) => {
            let p = BtParams::new(parse_rat(al)?, parse_rat(be)?)?;
            (Itm::from_bt(&p)?, json!({"family": "bt", "alpha": fmt_rat(&p.alpha), "beta": fmt_rat(&p.beta)}))
        }
        (None, None, Some(l)) => {
            let lambda = parse_rat_list(l)?;
            if let Some(d) = a.d {
                ensure!(d == lambda.len(), "--d {d} does not match {} lengths", lambda.len());
            }
            let p = BruinParams::new(lambda)?;
            let lam: Vec<String> = p.lambda.iter().map(fmt_rat).collect();
            (Itm::from_bruin(&p)?, json!({"family": "bruin", "d": p.d(), "lambda": lam}))
        }
        _ => bail!("give either --alpha and --beta, or --lambda"),
    };
    let c = map.classify(a.depth);
    let (label, attractor) = match &c {
        Classification::FiniteType { n } => (format!("finite type, n = {n}"), map.attractor(*n)),
        Classification::Unresolved { depth, attractor } => {
            (format!("unresolved after {depth} steps"), attractor.clone())
        }
    };
    let mut rep = Report::new("classification");
    rep.push(
        Check::info("classification", label)
            .with("intervals", Value::exact(attractor.len()))
            .with("measure", Value::exact(fmt_rat(&attractor.total_length())))
            .mirrors("finite type iff the attractor sequence stabilises"),
    );
    let data = json!({
        "params": params,
        "depth": a.depth,
        "classification": c,
        "attractor": {
            "intervals": attractor.to_strings(),
            "count": attractor.len(),
            "measure": fmt_rat(&attractor.total_length()),
        },
    });
    Ok(Outcome { reports: vec![rep], data, table: None })
}

fn verify(a: &VerifyArgs, seed: u64) -> Result<Outcome> {
    let kmax = a.kmax;
    let rep = match a.suite {
        Suite::ColumnGrowth => column_growth(a.trials, kmax.unwrap_or(10), seed)?,
        Suite::Pf => pf_constants(u32::try_from(kmax.unwrap_or(40)).context("--kmax too large")?),
        Suite::Conjugation => conjugation_suite(a.d.unwrap_or(8), kmax.unwrap_or(50))?,
        Suite::Commutators => verify_commutation_relations(a.d.unwrap_or(3))?,
        Suite::Steinberg => steinberg_report(a.d.unwrap_or(3))?,
        Suite::Galois => galois_suite(kmax.unwrap_or(100))?,
        Suite::Order => {
            let d = a.d.unwrap_or(3);
            let mut r = order_suite(d, kmax.unwrap_or(20))?;
            if d == 3 {
                r.extend(cnorm_ratio_check(kmax.unwrap_or(20))?);
            }
            r
        }
    };
    Ok(Outcome { reports: vec![rep], data: json!({}), table: None })
}

/// Seeded sequences of length `1..=15` with `k` uniform in `1..=kmax`.
fn column_growth(trials: usize, kmax: u64, seed: u64) -> Result<Report> {
    let spec = SamplingSpec::uniform(1, kmax, seed);
    spec.validate()?;
    let mut rep = Report::new(format!("column growth, {trials} sequences, k <= {kmax}"));
    let mut first_bad = None;
    for i in 0..trials {
        let mut ks = spec.sample(i as u64, 15);
        ks.truncate(1 + i % 15);
        let r = verify_column_growth(&ks)?;
        let rec_ok = recursion_sequences(&ks).is_ok();
        if first_bad.is_none() && (!r.passed() || !rec_ok) {
            first_bad = Some((ks, r, rec_ok));
        }
    }
    rep.push(
        Check::new(
            "all-sequences",
            first_bad.is_none(),
            match &first_bad {
                None => format!("{trials} sequences pass at every prefix"),
                Some((ks, _, _)) => format!("first failure at ks = {ks:?}"),
            },
        )
        .with("trials", Value::exact(trials))
        .mirrors("column-growth lemma and the (x, y, z), (a, b, c) recursions"),
    );
    if let Some((_, r, rec_ok)) = first_bad {
        rep.extend(r);
        rep.push(Check::new("recursions", rec_ok, "recursion sequences against product columns"));
    }
    Ok(rep)
}

fn sampling_spec(a: &LyapunovArgs, seed: u64) -> Result<SamplingSpec> {
    let ks = || -> Result<Vec<u64>> {
        let s = a.ks.as_deref().context("--ks is required for this distribution")?;
        Ok(s.parse::<KSequence>()?.into_vec())
    };
    let spec = match a.dist {
        DistKind::Geometric => SamplingSpec::geometric(a.p, a.kmax, seed),
        DistKind::Uniform => SamplingSpec::uniform(a.kmin, a.kmax, seed),
        DistKind::Periodic => SamplingSpec { seed, ..SamplingSpec::periodic(ks()?) },
        DistKind::Empirical => SamplingSpec::empirical(ks()?, seed),
    };
    spec.validate()?;
    Ok(spec)
}

fn estimate_rows(seed: u64, prefix: &str, est: &LyapunovEstimate) -> Vec<Row> {
    est.exponents
        .iter()
        .zip(&est.ci95)
        .enumerate()
        .map(|(i, (&v, &c))| Row { seed, quantity: format!("{prefix}{}", i + 1), value: v, ci95: Some(c) })
        .collect()
}

/// Float values of a report, with lists numbered from 1.
fn float_rows(seed: u64, rep: &Report) -> Vec<Row> {
    let mut rows = Vec::new();
    for (k, v) in rep.checks.iter().flat_map(|c| c.values.iter()) {
        match v {
            Value::Float { value, ci95 } => rows.push(Row { seed, quantity: k.clone(), value: *value, ci95: *ci95 }),
            Value::List { values } => {
                for (i, x) in values.iter().enumerate() {
                    if let Value::Float { value, ci95 } = x {
                        rows.push(Row { seed, quantity: format!("{k}_{}", i + 1), value: *value, ci95: *ci95 });
                    }
                }
            }
            _ => {}
        }
    }
    rows
}

fn lyapunov(a: &LyapunovArgs, seed: u64) -> Result<Outcome> {
    ensure!(a.seeds >= 1, "--seeds must be at least 1");
    let family: Family = a.family.parse()?;
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    let mut runs = Vec::new();
    for s in seed..seed.checked_add(a.seeds).context("seed range overflows")? {
        let spec = sampling_spec(a, s)?;
        match a.mode {
            LyapunovMode::Spectrum | LyapunovMode::Top => {
                let est = if a.mode == LyapunovMode::Spectrum {
                    spectrum(family, &spec, a.d, a.steps, a.samples)?
                } else {
                    top_exponent(family, &spec, a.d, a.steps, a.samples)?
                };
                let mut rep = Report::new(format!("{} exponents of {}, seed {s}", mode_name(a.mode), family.name()));
                for (i, (v, c)) in est.exponents.iter().zip(&est.ci95).enumerate() {
                    rep.push(Check::info(format!("lambda{}", i + 1), format!("{v:.6} +/- {c:.2e}"))
                        .with("value", Value::float_ci(*v, *c)));
                }
                if a.mode == LyapunovMode::Spectrum {
                    // every family is unimodular, so the exponents sum to zero
                    let sum = est.sum();
                    rep.push(
                        Check::new("sum-zero", sum.abs() < 1e-6, format!("sum of exponents {sum:.2e}"))
                            .with("sum", Value::float(sum))
                            .mirrors("determinant one up to sign"),
                    );
                }
                rows.extend(estimate_rows(s, "lambda", &est));
                runs.push(serde_json::to_value(&est)?);
                reports.push(rep);
            }
            LyapunovMode::Gap | LyapunovMode::Lambda2 => {
                let rep = if a.mode == LyapunovMode::Gap {
                    exponent_gap(&spec, a.d, a.steps, a.samples)?
                } else {
                    second_exponent_sign(&spec, a.d, a.steps, a.samples)?
                };
                rows.extend(float_rows(s, &rep));
                reports.push(rep);
            }
        }
    }
    let data = json!({
        "family": family,
        "d": a.d,
        "mode": a.mode,
        "seeds": (seed..seed + a.seeds).collect::<Vec<_>>(),
        "estimates": runs,
    });
    Ok(Outcome { reports, data, table: Some(rows) })
}

fn mode_name(m: LyapunovMode) -> &'static str {
    match m {
        LyapunovMode::Spectrum => "spectrum",
        LyapunovMode::Top => "top",
        LyapunovMode::Gap => "gap",
        LyapunovMode::Lambda2 => "lambda2",
    }
}

fn construct(a: &ConstructArgs, seed: u64) -> Result<Outcome> {
    match a.kind {
        Construction::MinusOne => minus_one(a, seed),
        Construction::Irrational => irrational(a, seed),
    }
}

fn minus_one(a: &ConstructArgs, seed: u64) -> Result<Outcome> {
    let plan = build_minus_one(a.blocks, a.odd)?;
    let mut cert = Report::new("eigenvalue -1 certificates");
    for (n, [u, v, w]) in plan.lengths.iter().enumerate().skip(1) {
        let ok = !u.bit(0) && v.bit(0) && !w.bit(0);
        cert.push(
            Check::new(format!("parity-{}", 2 * n), ok, format!("|u| = {u}, |v| = {v}, |w| = {w}"))
                .mirrors("u and w towers even, v tower odd"),
        );
    }
    for b in &plan.blocks {
        let bound = itmlab::Rat::new(1.into(), num_bigint::BigInt::from(1) << b.n);
        cert.push(
            Check::new(format!("growth-{}", b.n), b.slack > 0u32.into(), format!("slack {}", b.slack))
                .with("slack", Value::exact(&b.slack))
                .mirrors("growth inequality for k_{2n+1}"),
        );
        cert.push(
            Check::new(format!("share-{}", b.n), b.max_share < bound, format!("max share {}", fmt_rat(&b.max_share)))
                .with("max_share", Value::exact(fmt_rat(&b.max_share))),
        );
    }
    let half = itmlab::rational::rat(1, 2);
    let ks = plan.ks.to_vec();
    for n in 1..=a.blocks {
        let v = veech_components(&ks, &half, 2 * n)?;
        let want = [itmlab::rational::rat(0, 1), half.clone(), itmlab::rational::rat(0, 1)];
        cert.push(Check::new(
            format!("veech-{}", 2 * n),
            v[..] == want[..],
            format!("||h/2|| = ({})", v.iter().map(fmt_rat).collect::<Vec<_>>().join(", ")),
        ));
    }
    let mut reports = vec![cert];
    let mut residuals = Vec::new();
    for n in 1..=a.blocks {
        let r = minus_one_residual(&plan, n, a.points, seed)?;
        reports.push(r.to_report(&format!("eigenfunction residual, level {}", 2 * n)));
        residuals.push(r);
    }
    let data = json!({"plan": plan, "residuals": residuals});
    Ok(Outcome { reports, data, table: None })
}

fn irrational(a: &ConstructArgs, seed: u64) -> Result<Outcome> {
    let plan = build_irrational(a.blocks)?;
    let (gamma, err) = best_gamma(&plan)?;
    let mut reports = vec![spacer_towers(&plan, a.blocks)?];
    let mut residuals = Vec::new();
    for n in 1..a.blocks {
        let r = gamma_eigen_residual(&plan, n, a.points, seed)?;
        reports.push(r.to_report(&format!("rotation eigenfunction residual, level {}", 3 * n)));
        residuals.push(r);
    }
    let data = json!({
        "plan": plan,
        "gamma": {
            "convergent": fmt_rat(&gamma),
            "error_bound": fmt_rat(&err),
            "approx": rat_to_f64(&gamma),
        },
        "residuals": residuals,
    });
    Ok(Outcome { reports, data, table: None })
}

fn towers(a: &TowersArgs) -> Result<Outcome> {
    let ks = a.ks.parse::<KSequence>()?.into_vec();
    let n = a.n.unwrap_or(ks.len());
    ensure!(n <= ks.len(), "--n {n} exceeds the itinerary length {}", ks.len());
    let fam = tower_names_d(&ks, n, a.d, a.cutoff)?;
    let heights = tower_heights(&ks, n, a.d)?;
    let masses = tower_masses(&ks, n, a.d)?;
    let names: Vec<Option<String>> = (0..a.d).map(|j| fam.name_string(j)).collect();
    let mut rep = Report::new(format!("towers at level {n}"));
    rep.push(
        Check::new("heights-match-names", fam.heights == heights, "name lengths equal the transpose-cocycle heights")
            .mirrors("heights follow the transpose of A"),
    );
    let prefix = fam.common_prefix().ok();
    let data = json!({
        "n": n,
        "d": a.d,
        "heights": heights.iter().map(|h| h.to_string()).collect::<Vec<_>>(),
        "names": names,
        "masses": masses.iter().map(fmt_rat).collect::<Vec<_>>(),
        "common_prefix": prefix.map(|p| p.to_string()),
    });
    Ok(Outcome { reports: vec![rep], data, table: None })
}

fn veech(a: &VeechArgs) -> Result<Outcome> {
    let ks = a.ks.parse::<KSequence>()?.into_vec();
    let t = parse_rat(&a.t)?;
    let v = veech_components(&ks, &t, a.n)?;
    let heights = tower_heights(&ks, a.n, 3)?;
    let max = v.iter().max().cloned().expect("three towers");
    let mut rep = Report::new(format!("Veech residual at level {}", a.n));
    rep.push(
        Check::info("residual", format!("max ||t h|| = {}", fmt_rat(&max)))
            .with("max", Value::exact(fmt_rat(&max)))
            .mirrors("an eigenvalue e^{2 pi i t} forces ||t h|| -> 0 along balanced times"),
    );
    let data = json!({
        "t": fmt_rat(&t),
        "n": a.n,
        "heights": heights.iter().map(|h| h.to_string()).collect::<Vec<_>>(),
        "components": v.iter().map(fmt_rat).collect::<Vec<_>>(),
        "max": fmt_rat(&max),
    });
    Ok(Outcome { reports: vec![rep], data, table: None })
}
