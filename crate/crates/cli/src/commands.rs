use std::fmt::Display;

use num_bigint::BigInt;
use rayon::prelude::*;
use thiserror::Error;

use trinomlab_core::field::{prime_power, FieldCtx, QuadraticExtension};
use trinomlab_core::hs::{
    self, conjectured_residue, h_pair_congruence, h_s_link, has_dyadic_denominator, is_integral,
    s_congruence, CongruenceReport, HForm, HsEvaluator, RecOperator, RecParity,
};
use trinomlab_core::pp::{
    self, power_sum_from_values, BalancedSumEvaluator, ExponentSplit, Parity, PpError,
    PreimageSolver,
};
use trinomlab_core::quadsums::{self, QuadSums};
use trinomlab_core::trinomial::{build_trinomial, evaluate_case, predict_pp};
use trinomlab_core::Felt;

use crate::args::Command;
use crate::report::{elem, num, ReportRecord, Reporter, Status, Value};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn usage(e: impl Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn internal(e: impl Display) -> CliError {
    CliError::Internal(e.to_string())
}

pub struct Limits {
    pub size_cap: u64,
    pub a_cap: u64,
}

/// An integer (reduced mod p) or comma-separated coefficients `c0,c1,...`.
pub fn parse_element(ctx: &FieldCtx, s: &str) -> Result<Felt, CliError> {
    let s = s.trim();
    if s.contains(',') {
        let coeffs = s
            .split(',')
            .map(|c| c.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| usage(format!("bad coefficient list '{s}'")))?;
        ctx.from_coeffs(&coeffs)
            .map_err(|_| usage(format!("'{s}' is not an element of F_{}", ctx.order())))
    } else {
        let v = s
            .parse::<i64>()
            .map_err(|_| usage(format!("bad element '{s}'")))?;
        Ok(ctx.from_int(v))
    }
}

fn trinomial_field(q: u64, size_cap: u64) -> Result<QuadraticExtension, CliError> {
    if prime_power(q).is_none() {
        return Err(usage(format!("q = {q} is not a prime power")));
    }
    if q <= 2 {
        return Err(usage("q must exceed 2"));
    }
    QuadraticExtension::with_cap(q, size_cap).map_err(usage)
}

fn trinomial_record(suite: &str, status: Status, qe: &QuadraticExtension) -> ReportRecord {
    ReportRecord::new(suite, status)
        .param("q", num(qe.q()))
        .field("", qe.base())
        .field("ext_", qe.ext())
}

fn bool_value(b: bool) -> Value {
    num(b)
}

fn rational(x: &hs::ExactRational) -> Value {
    if x.denom() == &BigInt::from(1) {
        num(x.numer())
    } else {
        num(format!("{}/{}", x.numer(), x.denom()))
    }
}

pub fn run(cmd: &Command, lim: &Limits, rep: &mut Reporter) -> Result<(), CliError> {
    match cmd {
        Command::Verify { q, all_t: _, t } => verify(*q, t.as_deref(), lim, rep),
        Command::Preimage { q, t, y, all_y: _ } => preimage(*q, t, y.as_deref(), lim, rep),
        Command::Powersum { q } => powersum(*q, lim, rep),
        Command::Lemmas { q } => lemma_sweep(*q, lim, rep),
        Command::Hseq { max, recurrence } => hseq(*max, *recurrence, lim, rep),
        Command::Congruence { q } => congruence(*q, lim, rep),
        Command::Conjecture { max } => conjecture(*max, lim, rep),
        Command::FieldInfo { p, n } => field_info(*p, *n, lim, rep),
    }
}

fn verify(q: u64, t: Option<&str>, lim: &Limits, rep: &mut Reporter) -> Result<(), CliError> {
    let qe = trinomial_field(q, lim.size_cap)?;
    let ts: Vec<Felt> = match t {
        Some(s) => {
            let tb = parse_element(qe.base(), s)?;
            if tb.is_zero() {
                return Err(usage("t must be nonzero"));
            }
            vec![qe.embed(tb)]
        }
        None => qe.base_units().collect(),
    };
    let cases = ts
        .par_iter()
        .map(|&t| evaluate_case(&qe, t))
        .collect::<Result<Vec<_>, _>>()
        .map_err(internal)?;
    for c in cases {
        let obs = c.observed.as_ref().expect("brute force ran");
        let mut r = trinomial_record("verify", Status::from_check(!c.mismatch()), &qe)
            .param("t", elem(c.t_base))
            .detail("predicted", bool_value(c.predicted))
            .detail("observed", bool_value(obs.is_pp))
            .detail("image_size", num(obs.image_size));
        if let Some((x1, x2)) = obs.collision {
            r = r
                .detail("collision_x1", elem(x1))
                .detail("collision_x2", elem(x2));
        }
        rep.emit(&r)?;
    }
    Ok(())
}

fn preimage(
    q: u64,
    t: &str,
    y: Option<&str>,
    lim: &Limits,
    rep: &mut Reporter,
) -> Result<(), CliError> {
    let qe = trinomial_field(q, lim.size_cap)?;
    let tb = parse_element(qe.base(), t)?;
    if tb.is_zero() {
        return Err(usage("t must be nonzero"));
    }
    let t_ext = qe.embed(tb);
    let ext = qe.ext();
    let ys: Vec<Felt> = match y {
        Some(s) => vec![parse_element(ext, s)?],
        None => ext.elements().collect(),
    };
    let solver = PreimageSolver::new(&qe, t_ext, Parity::of(&qe)).map_err(usage)?;
    let is_pp = predict_pp(&qe, t_ext).map_err(internal)?;
    let f = build_trinomial(&qe, t_ext).map_err(internal)?;
    let mut in_image = vec![false; ext.order() as usize];
    for v in pp::value_table(ext, &f).map_err(internal)? {
        in_image[v.index() as usize] = true;
    }
    let results: Vec<_> = ys.par_iter().map(|&y| (y, solver.solve(y))).collect();
    for (y, res) in results {
        let base = trinomial_record("preimage", Status::Pass, &qe)
            .param("t", elem(tb))
            .param("y", elem(y))
            .detail("predicted_pp", bool_value(is_pp))
            .detail("in_image", bool_value(in_image[y.index() as usize]));
        let r = match res {
            Ok(p) => {
                let ok = pp::trinomial_value(&qe, t_ext, p.x) == y;
                let mut r = base
                    .detail("x", elem(p.x))
                    .detail("verified", bool_value(ok));
                if let Some(tau) = p.tau {
                    r = r.detail("tau", elem(tau));
                }
                if let Some(u) = p.cubic_root {
                    r = r.detail("cubic_root", elem(u));
                }
                r.status = Status::from_check(ok);
                r
            }
            Err(e @ (PpError::NoPreimage | PpError::ZeroTau)) => {
                let mut r = base.detail("error", num(error_code(&e)));
                // only a permutation guarantees the construction succeeds
                r.status = if is_pp {
                    Status::Fail
                } else {
                    Status::ReportOnly
                };
                r
            }
            Err(e) => return Err(internal(e)),
        };
        rep.emit(&r)?;
    }
    Ok(())
}

fn error_code(e: &PpError) -> &'static str {
    match e {
        PpError::NoPreimage => "no-preimage",
        PpError::ZeroTau => "zero-tau",
        _ => "other",
    }
}

fn powersum(q: u64, lim: &Limits, rep: &mut Reporter) -> Result<(), CliError> {
    let qe = trinomial_field(q, lim.size_cap)?;
    let ev = BalancedSumEvaluator::new(&qe);
    let ts: Vec<Felt> = qe.base().elements().skip(1).collect();
    let rows = ts
        .par_iter()
        .map(|&tb| -> Result<Vec<ReportRecord>, CliError> {
            let t = qe.embed(tb);
            let f = build_trinomial(&qe, t).map_err(internal)?;
            let values = pp::value_table(qe.ext(), &f).map_err(internal)?;
            (0..q)
                .map(|alpha| {
                    let split = ExponentSplit::balanced(q, alpha).map_err(internal)?;
                    let direct = power_sum_from_values(qe.ext(), &values, split.exponent());
                    let closed = ev.rhs(split, tb).map_err(internal)?;
                    Ok(trinomial_record(
                        "powersum",
                        Status::from_check(direct == qe.embed(closed)),
                        &qe,
                    )
                    .param("t", elem(tb))
                    .param("alpha", num(split.alpha))
                    .param("beta", num(split.beta))
                    .param("s", num(split.exponent()))
                    .detail("direct", elem(direct))
                    .detail("closed_form", elem(qe.embed(closed))))
                })
                .collect()
        })
        .collect::<Result<Vec<_>, _>>()?;
    for r in rows.iter().flatten() {
        rep.emit(r)?;
    }
    Ok(())
}

fn lemma_sweep(q: u64, lim: &Limits, rep: &mut Reporter) -> Result<(), CliError> {
    let (p, n) = prime_power(q).ok_or_else(|| usage(format!("q = {q} is not a prime power")))?;
    if p == 2 {
        return Err(usage("the binomial sums need odd q"));
    }
    let qe = QuadraticExtension::with_cap(q, lim.size_cap).map_err(usage)?;
    let base = qe.base();
    debug_assert_eq!((base.characteristic(), base.degree()), (p, n));
    let rows = quadsums::sweep(base).map_err(internal)?;
    for row in rows {
        let opt = |v: Option<Felt>| v.map(elem).unwrap_or_else(|| num("none"));
        let mut r = ReportRecord::new("lemmas", Status::from_check(row.holds()))
            .param("q", num(q))
            .field("", base)
            .param("z", elem(row.z))
            .detail("class", num(row.class.kind.as_str()))
            .detail("root_count", num(row.class.roots.len()))
            .detail("central_sum", elem(row.central))
            .detail("central_expected", elem(row.central_expected))
            .detail("shifted_sum", elem(row.shifted))
            .detail("shifted_expected", opt(row.shifted_expected))
            .detail("weighted_sum", elem(row.weighted))
            .detail("weighted_expected", opt(row.weighted_expected));
        for (i, &x) in row.class.roots.iter().enumerate() {
            r = r.detail(&format!("root_{}", i + 1), elem(x));
        }
        rep.emit(&r)?;
    }
    let ev = BalancedSumEvaluator::new(&qe);
    let sums = QuadSums::new(base).map_err(internal)?;
    for t in base.elements().skip(1) {
        let b = quadsums::bridge(&qe, &ev, &sums, t).map_err(internal)?;
        let r = trinomial_record("lemmas-bridge", Status::from_check(b.holds()), &qe)
            .param("t", elem(t))
            .detail("z", elem(b.z))
            .detail("power_sum_s0", elem(b.first_power_sum))
            .detail("lemma_side_s0", elem(b.first_lemma_side))
            .detail("power_sum_s1", elem(b.second_power_sum))
            .detail("lemma_side_s1", elem(b.second_lemma_side));
        rep.emit(&r)?;
    }
    Ok(())
}

fn over_q(r: ReportRecord) -> ReportRecord {
    r.param("domain", num("Q"))
}

fn hseq(
    max: u64,
    recurrence: Option<u64>,
    lim: &Limits,
    rep: &mut Reporter,
) -> Result<(), CliError> {
    let ev = HsEvaluator::new(lim.a_cap);
    if max > lim.a_cap {
        return Err(usage(format!("--max {max} exceeds --a-cap {}", lim.a_cap)));
    }
    let rows = (0..=max)
        .into_par_iter()
        .map(|a| {
            let r = ev.h(a, HForm::Restricted)?;
            let u = ev.h(a, HForm::Unrestricted)?;
            let s = ev.s(a)?;
            Ok((a, r, u, s))
        })
        .collect::<Result<Vec<_>, hs::HsError>>()
        .map_err(internal)?;
    for (a, r, u, s) in rows {
        let ok = r == u && is_integral(&u) && has_dyadic_denominator(&s);
        let rec = over_q(ReportRecord::new("hseq", Status::from_check(ok)))
            .param("a", num(a))
            .detail("h", rational(&u))
            .detail("h_restricted", rational(&r))
            .detail("s", rational(&s));
        rep.emit(&rec)?;
    }
    if let Some(nmax) = recurrence {
        let reach = RecOperator::for_parity(RecParity::Odd).reach(nmax);
        if reach > lim.a_cap {
            return Err(usage(format!(
                "--recurrence {nmax} needs H up to {reach}, above --a-cap {}",
                lim.a_cap
            )));
        }
        let h = hs::h_values(&ev, reach).map_err(internal)?;
        for parity in [RecParity::Even, RecParity::Odd] {
            let op = RecOperator::for_parity(parity);
            for n in 0..=nmax {
                let res = op.apply(n, &h);
                let rec = over_q(ReportRecord::new(
                    "recurrence",
                    Status::from_check(res == BigInt::from(0)),
                ))
                .param(
                    "parity",
                    num(if parity == RecParity::Even {
                        "even"
                    } else {
                        "odd"
                    }),
                )
                .param("n", num(n))
                .detail("residual", num(res));
                rep.emit(&rec)?;
            }
        }
    }
    Ok(())
}

fn congruence(q: u64, lim: &Limits, rep: &mut Reporter) -> Result<(), CliError> {
    let ev = HsEvaluator::new(lim.a_cap);
    let h = h_pair_congruence(&ev, q).map_err(usage)?;
    let s = s_congruence(&ev, q).map_err(usage)?;
    let link = h_s_link(&ev, q).map_err(usage)?;
    let (p, n) = prime_power(q).expect("checked");
    let fp = FieldCtx::with_cap(p, n, lim.size_cap).map_err(usage)?;
    let emit = |rep: &mut Reporter, suite: &str, key: &str, report: &CongruenceReport| {
        for &(a, res) in &report.residues {
            let mut r = ReportRecord::new(suite, Status::from_check(res == 0))
                .param("q", num(q))
                .field("", &fp)
                .param(key, num(a))
                .detail("residue", num(res));
            if suite == "congruence-h" {
                r = r.param("beta", num(q - 1 - a));
            }
            rep.emit(&r)?;
        }
        Ok::<(), std::io::Error>(())
    };
    emit(rep, "congruence-h", "alpha", &h)?;
    emit(rep, "congruence-s", "a", &s)?;
    emit(rep, "congruence-hs", "a", &link)?;
    Ok(())
}

fn conjecture(max: u64, lim: &Limits, rep: &mut Reporter) -> Result<(), CliError> {
    let ev = HsEvaluator::new(lim.a_cap);
    let report = hs::s_mod3_scan(&ev, max).map_err(usage)?;
    let f3 = FieldCtx::new(3, 1).map_err(internal)?;
    for (a, &res) in report.residues.iter().enumerate() {
        let expected = conjectured_residue(a as u64);
        let r = ReportRecord::new("conjecture", Status::ReportOnly)
            .field("", &f3)
            .param("a", num(a))
            .detail("residue", num(res))
            .detail("expected", num(expected))
            .detail("matches", bool_value(res == expected));
        rep.emit(&r)?;
    }
    let mut r = ReportRecord::new("conjecture-summary", Status::ReportOnly)
        .field("", &f3)
        .param("max", num(max))
        .detail("scanned", num(report.residues.len()));
    r = match report.first_counterexample {
        Some(a) => r
            .detail("first_counterexample", num(a))
            .detail("counterexample_residue", num(report.residues[a as usize]))
            .detail("counterexample_expected", num(conjectured_residue(a))),
        None => r.detail("first_counterexample", num("none")),
    };
    rep.emit(&r)?;
    Ok(())
}

fn field_info(p: u64, n: u32, lim: &Limits, rep: &mut Reporter) -> Result<(), CliError> {
    let f = FieldCtx::with_cap(p, n, lim.size_cap).map_err(usage)?;
    let r = ReportRecord::new("field-info", Status::ReportOnly)
        .field("", &f)
        .detail("order", num(f.order()))
        .detail("generator", elem(f.generator()));
    rep.emit(&r)?;
    Ok(())
}
