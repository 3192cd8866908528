//! Subcommand implementations.

use std::fs;
use std::path::Path;

use ncszego::christoffel::{christoffel_function, LimitOutcome};
use ncszego::freemonoid::Word;
use ncszego::io::{GammaFile, MomentFile, TupleFile};
use ncszego::linalg::CMatrix;
use ncszego::moments::MomentFamily;
use ncszego::opuc;
use ncszego::szego;
use ncszego::verblunsky::{extract, moments_from_polys, synthesize, RecurrencePair};
use ncszego::zeros::{self, SampleKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::output::{fmt_float, to_json_string, write_output};
use crate::{
    CompareArgs, Density, EvalArgs, Failure, Format, KernelCheckArgs, SweepArgs, SynthArgs,
    TableArgs,
};

type CliResult = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn require_positive_tol(tol: f64) -> Result<(), Failure> {
    if tol > 0.0 {
        Ok(())
    } else {
        Err(Failure::input(format!("--tol must be positive, got {tol}")))
    }
}

fn load_moments(path: &Path, fill_zero: bool) -> Result<MomentFamily, Failure> {
    let mut file = MomentFile::from_json(&read(path)?).map_err(Failure::input)?;
    file.fill_zero |= fill_zero;
    file.to_family().map_err(Failure::input)
}

/// Largest n with σ(n) within the horizon; equals the horizon length when
/// the horizon sits on the σ(n) line.
fn max_sigma_depth(m: &MomentFamily) -> usize {
    let mut n = 0;
    while Word::sigma(n + 1, m.alphabet()) <= *m.horizon() {
        n += 1;
    }
    n
}

fn matrix_to_nested(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn kernel_check(args: KernelCheckArgs) -> CliResult {
    require_positive_tol(args.tol)?;
    let family = load_moments(&args.moments, args.fill_zero)?;
    let horizon = family.horizon().clone();
    let positivity = family.check_nontrivial(&horizon, args.tol)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let axioms = family.axiom_spot_check(args.triples, &mut rng)?;

    const AXIOM_TOL: f64 = 1e-12;
    let axioms_ok = axioms.structural_zero_violations == 0
        && axioms.max_translation_dev <= AXIOM_TOL
        && axioms.max_hermitian_dev <= AXIOM_TOL;

    #[derive(Serialize)]
    struct Report {
        nontrivial: bool,
        min_pivot: f64,
        failed_row: Option<usize>,
        triples: usize,
        max_translation_dev: f64,
        max_hermitian_dev: f64,
        orthogonal_pairs: usize,
        structural_zero_violations: usize,
        verdict: &'static str,
    }
    let report = Report {
        nontrivial: positivity.nontrivial,
        min_pivot: positivity.min_pivot,
        failed_row: positivity.failed_row,
        triples: axioms.triples,
        max_translation_dev: axioms.max_translation_dev,
        max_hermitian_dev: axioms.max_hermitian_dev,
        orthogonal_pairs: axioms.orthogonal_pairs,
        structural_zero_violations: axioms.structural_zero_violations,
        verdict: if positivity.nontrivial && axioms_ok { "ok" } else { "violated" },
    };

    let content = match args.format {
        Format::Json => to_json_string(&report)? + "\n",
        Format::Csv => {
            let mut s = String::from(
                "nontrivial,min_pivot,triples,max_translation_dev,max_hermitian_dev,orthogonal_pairs,structural_zero_violations,verdict\n",
            );
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                report.nontrivial,
                fmt_float(report.min_pivot),
                report.triples,
                fmt_float(report.max_translation_dev),
                fmt_float(report.max_hermitian_dev),
                report.orthogonal_pairs,
                report.structural_zero_violations,
                report.verdict,
            ));
            s
        }
    };
    write_output(args.out.as_deref(), &content)?;
    if report.verdict == "ok" {
        Ok(())
    } else {
        Err(Failure::property("kernel check failed (see report)"))
    }
}

pub fn verblunsky_extract(args: crate::ExtractArgs) -> CliResult {
    let family = load_moments(&args.moments, args.fill_zero)?;
    let sigma0 = match args.max_len {
        Some(len) => {
            let w = Word::sigma(len, family.alphabet());
            if w > *family.horizon() {
                return Err(Failure::input(format!(
                    "--max-len {len} exceeds the moment horizon {}",
                    family.horizon()
                )));
            }
            w
        }
        None => family.horizon().clone(),
    };
    let extraction = extract(&family, &sigma0)?;
    for word in &extraction.near_trivial {
        eprintln!("warning: coefficient at {word} is within 1e-10 of the unit circle; finite moment data cannot certify non-triviality there");
    }
    let content = to_json_string(&GammaFile::from_family(&extraction.gamma))? + "\n";
    write_output(args.out.as_deref(), &content)?;
    Ok(())
}

pub fn favard_synth(args: SynthArgs) -> CliResult {
    let file = GammaFile::from_json(&read(&args.gamma)?).map_err(Failure::input)?;
    let horizon = Word::sigma(args.max_len, file.d);
    let gamma = file.to_family(horizon.clone()).map_err(Failure::input)?;
    let pair = synthesize(&gamma, &horizon)?;
    let moments = moments_from_polys(&pair)?;
    let content = to_json_string(&MomentFile::from_family(&moments))? + "\n";
    write_output(args.out.as_deref(), &content)?;
    Ok(())
}

pub fn szego_table(args: TableArgs) -> CliResult {
    let family = load_moments(&args.moments, args.fill_zero)?;
    if Word::sigma(args.n, family.alphabet()) > *family.horizon() {
        return Err(Failure::input(format!(
            "--N {} exceeds the moment horizon {}",
            args.n,
            family.horizon()
        )));
    }
    let table = szego::szego_table(&family, args.n)?;
    let content = match args.format {
        Format::Json => to_json_string(&table)? + "\n",
        Format::Csv => {
            let mut s = String::from(
                "n,item_i,item_ii,item_iii,item_iv,item_v,item_vi,item_vii,item_viii,item_ix,res_first,res_second\n",
            );
            for row in &table.rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                    row.n,
                    fmt_float(row.item_i),
                    fmt_float(row.item_ii),
                    fmt_float(row.item_iii),
                    fmt_float(row.item_iv),
                    fmt_float(row.item_v),
                    fmt_float(row.item_vi),
                    fmt_float(row.item_vii),
                    fmt_float(row.item_viii),
                    fmt_float(row.item_ix),
                    fmt_float(row.res_first),
                    fmt_float(row.res_second),
                ));
            }
            s
        }
    };
    write_output(args.out.as_deref(), &content)?;
    if table.truncated {
        Err(Failure::property(
            "measure became trivial before the requested depth; table truncated",
        ))
    } else {
        Ok(())
    }
}

pub fn christoffel_eval(args: EvalArgs) -> CliResult {
    require_positive_tol(args.tol)?;
    let family = load_moments(&args.moments, args.fill_zero)?;
    let tuple = TupleFile::from_json(&read(&args.point)?)
        .map_err(Failure::input)?
        .to_tuple()
        .map_err(Failure::input)?;
    if tuple.alphabet() != family.alphabet() {
        return Err(Failure::input(format!(
            "tuple has d={} but the measure has d={}",
            tuple.alphabet(),
            family.alphabet()
        )));
    }
    let depth_cap = max_sigma_depth(&family);
    let max_n = args.max_n.unwrap_or(depth_cap);
    if max_n > depth_cap {
        return Err(Failure::input(format!(
            "--max-n {max_n} exceeds the moment horizon (σ({depth_cap}) is the deepest full level)"
        )));
    }
    let limit = christoffel_function(&family, &tuple, args.tol, max_n)?;

    #[derive(Serialize)]
    struct Report {
        outcome: String,
        converged: bool,
        value: Vec<Vec<[f64; 2]>>,
        trace: Vec<Vec<Vec<[f64; 2]>>>,
    }
    let outcome = match limit.outcome {
        LimitOutcome::Converged { at_n } => format!("converged at n={at_n}"),
        LimitOutcome::DecayedToZero => "decaying to zero".to_string(),
        LimitOutcome::HorizonExhausted => "horizon exhausted".to_string(),
    };
    let report = Report {
        outcome,
        converged: limit.converged(),
        value: matrix_to_nested(&limit.value),
        trace: limit.trace.iter().map(matrix_to_nested).collect(),
    };
    write_output(args.out.as_deref(), &(to_json_string(&report)? + "\n"))?;
    Ok(())
}

fn sweep_pair(args: &SweepArgs) -> Result<RecurrencePair, Failure> {
    if let Some(path) = &args.gamma {
        let file = GammaFile::from_json(&read(path)?).map_err(Failure::input)?;
        let horizon = Word::sigma(args.nmax, file.d);
        let gamma = file.to_family(horizon.clone()).map_err(Failure::input)?;
        Ok(synthesize(&gamma, &horizon)?)
    } else if let Some(path) = &args.moments {
        let family = load_moments(path, args.fill_zero)?;
        let horizon = Word::sigma(args.nmax, family.alphabet());
        if horizon > *family.horizon() {
            return Err(Failure::input(format!(
                "--nmax {} exceeds the moment horizon {}",
                args.nmax,
                family.horizon()
            )));
        }
        let gamma = extract(&family, &horizon)?.gamma;
        Ok(synthesize(&gamma, &horizon)?)
    } else {
        Err(Failure::input("zeros sweep needs --gamma or --moments"))
    }
}

pub fn zeros_sweep(args: SweepArgs) -> CliResult {
    require_positive_tol(args.tol)?;
    let pair = sweep_pair(&args)?;
    let d = pair.alphabet();

    #[derive(Serialize)]
    struct Line {
        kind: String,
        k: usize,
        d: u8,
        n: usize,
        #[serde(rename = "min_eig_M")]
        min_eig_m: f64,
        #[serde(rename = "min_eig_S")]
        min_eig_s: f64,
        boundary_gap: f64,
    }

    let kinds = [
        ("interior", SampleKind::Interior(args.radius)),
        ("boundary", SampleKind::Boundary),
        ("exterior", SampleKind::Exterior(args.scale)),
    ];
    let mut lines = String::new();
    let mut violations: Vec<String> = Vec::new();
    for k in 1..=args.kmax {
        for n in 1..=args.nmax {
            for (name, kind) in &kinds {
                for sample in 0..args.samples {
                    // Deterministic per-sample stream even if this loop is
                    // ever parallelised.
                    let seed = args.seed ^ (sample as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
                    let z = zeros::sample_tuple(*kind, k, d, seed);
                    let m_form = zeros::reverse_form(&pair, n, &z)?;
                    let s_form = zeros::level_form(&pair, n, &z)?;
                    let gap = (&m_form.matrix - &s_form.matrix).norm()
                        / m_form.matrix.norm().max(f64::MIN_POSITIVE);
                    match *name {
                        "interior" if m_form.min_eig <= 0.0 => violations.push(format!(
                            "interior sample {sample} (k={k}, n={n}): min_eig(M) = {:.3e}",
                            m_form.min_eig
                        )),
                        "exterior" if s_form.min_eig <= 0.0 => violations.push(format!(
                            "exterior sample {sample} (k={k}, n={n}): min_eig(S) = {:.3e}",
                            s_form.min_eig
                        )),
                        "boundary" if gap > args.tol || m_form.min_eig <= 0.0 => violations
                            .push(format!(
                                "boundary sample {sample} (k={k}, n={n}): gap {gap:.3e}, min_eig {:.3e}",
                                m_form.min_eig
                            )),
                        _ => {}
                    }
                    let line = Line {
                        kind: name.to_string(),
                        k,
                        d,
                        n,
                        min_eig_m: m_form.min_eig,
                        min_eig_s: s_form.min_eig,
                        boundary_gap: gap,
                    };
                    lines.push_str(&to_json_string(&line)?);
                    lines.push('\n');
                }
            }
        }
    }
    write_output(args.out.as_deref(), &lines)?;
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Failure::property(format!(
            "{} zero-theorem violations, first: {}",
            violations.len(),
            violations[0]
        )))
    }
}

pub fn oracle_compare(args: CompareArgs) -> CliResult {
    require_positive_tol(args.tol)?;
    let density: Box<dyn Fn(f64) -> f64> = match args.density {
        Density::Lebesgue => Box::new(|_| 1.0),
        Density::Bernstein => {
            if args.a.abs() >= 1.0 {
                return Err(Failure::input("--a must satisfy |a| < 1"));
            }
            Box::new(opuc::bernstein_szego_density(args.a))
        }
        Density::Fejer => Box::new(|theta: f64| (1.0 + theta.cos()) / 1.0),
    };
    let seq = opuc::quadrature_moments(&density, args.n, args.nodes)?;
    let oracle = seq.levinson_verblunsky()?;
    let family = seq.to_moment_family()?;
    let horizon = Word::sigma(args.n, 1);
    let pipeline = extract(&family, &horizon)?.gamma;

    #[derive(Serialize)]
    struct Entry {
        order: usize,
        oracle_re: f64,
        oracle_im: f64,
        pipeline_re: f64,
        pipeline_im: f64,
        dev: f64,
    }
    #[derive(Serialize)]
    struct Report {
        max_dev: f64,
        entries: Vec<Entry>,
    }

    let mut entries = Vec::new();
    let mut max_dev = 0.0f64;
    for (j, o) in oracle.iter().enumerate() {
        let p = pipeline.gamma(&Word::sigma(j + 1, 1))?;
        let dev = (o - p).norm();
        max_dev = max_dev.max(dev);
        entries.push(Entry {
            order: j,
            oracle_re: o.re,
            oracle_im: o.im,
            pipeline_re: p.re,
            pipeline_im: p.im,
            dev,
        });
    }
    let report = Report { max_dev, entries };
    write_output(args.out.as_deref(), &(to_json_string(&report)? + "\n"))?;
    if max_dev <= args.tol {
        Ok(())
    } else {
        Err(Failure::property(format!(
            "oracle and pipeline disagree: max deviation {max_dev:.3e} > {:.1e}",
            args.tol
        )))
    }
}
