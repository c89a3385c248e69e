//! P-recursive sequences and their eventual periodicity modulo `m`.
//!
//! A recurrence `P_0(n)·u_n = Σ_{i=1}^{r} P_i(n)·u_{n-i}` with `P_0(n)`
//! invertible mod `m` is a deterministic map on the finite state
//! `(n mod m, u_{n-1}, …, u_{n-r})`, because integer polynomials are periodic
//! mod `m` with a period dividing `m`. Brent's algorithm finds the cycle of
//! that map in constant memory; the residue sequence's minimal period divides
//! the state cycle length and is found by prime descent.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default cap on cycle-detection steps.
pub const DEFAULT_MAX_STEPS: u64 = 2_000_000_000;

/// Coefficient tables are precomputed when `m·(r+1)` stays under this size.
const TABLE_LIMIT: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CongruenceError {
    #[error("modulus must be at least 1")]
    InvalidModulus,
    #[error("recurrence needs at least P_0 and P_1")]
    NoOrder,
    #[error("leading polynomial P_0 is identically zero")]
    ZeroLeading,
    #[error("need at least {order} initial values, got {given}")]
    TooFewInitial { order: usize, given: usize },
    #[error("offset {offset} is smaller than the number of initial values {given}")]
    BadOffset { offset: usize, given: usize },
    #[error("declared order {declared} does not match {polys} polynomials")]
    OrderMismatch { declared: usize, polys: usize },
    #[error("P_0(n) is not invertible mod {m} for n = {n_mod} (mod {m})")]
    NotInvertible { m: u64, n_mod: u64 },
    #[error("P_0({n}) = {leading} does not divide the right-hand side {rhs}")]
    NotIntegral {
        n: usize,
        leading: BigInt,
        rhs: BigInt,
    },
    #[error("cycle detection exceeded the step budget of {0}")]
    BudgetExceeded(u64),
    #[error("bad integer literal {0:?}")]
    BadLiteral(String),
}

/// Integer polynomial in the index variable, coefficients from degree 0 up.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    coeffs: Vec<i64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn constant(c: i64) -> Self {
        Polynomial::new(vec![c])
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, n: i64) -> BigInt {
        let n = BigInt::from(n);
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, &c| acc * &n + c)
    }

    /// `P(n) mod m` for `n` already reduced mod `m`.
    pub fn eval_mod(&self, n: u64, m: u64) -> u64 {
        let m128 = m as u128;
        self.coeffs.iter().rev().fold(0u128, |acc, &c| {
            (acc * n as u128 + reduce_i64(c, m) as u128) % m128
        }) as u64
    }
}

fn reduce_i64(c: i64, m: u64) -> u64 {
    (c as i128).rem_euclid(m as i128) as u64
}

fn reduce_big(v: &BigInt, m: u64) -> u64 {
    v.mod_floor(&BigInt::from(m))
        .to_u64()
        .expect("residue fits")
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// `P_0(n) u_n = Σ_{i=1}^{r} P_i(n) u_{n-i}` for `n >= offset`.
///
/// `init` holds `u_{offset-len}, …, u_{offset-1}`; the first index of the
/// sequence is therefore `offset - init.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PRecurrence {
    polys: Vec<Polynomial>,
    init: Vec<BigInt>,
    offset: usize,
}

impl PRecurrence {
    pub fn new(
        polys: Vec<Polynomial>,
        init: Vec<BigInt>,
        offset: usize,
    ) -> Result<Self, CongruenceError> {
        if polys.len() < 2 {
            return Err(CongruenceError::NoOrder);
        }
        if polys[0].is_zero() {
            return Err(CongruenceError::ZeroLeading);
        }
        let order = polys.len() - 1;
        if init.len() < order {
            return Err(CongruenceError::TooFewInitial {
                order,
                given: init.len(),
            });
        }
        if offset < init.len() {
            return Err(CongruenceError::BadOffset {
                offset,
                given: init.len(),
            });
        }
        Ok(PRecurrence {
            polys,
            init,
            offset,
        })
    }

    /// `b_n = 2(n-2)·b_{n-1} + (-n² + 5n - 5)·b_{n-2}` for `n >= 3`, with
    /// `b_0 = b_1 = 0`, `b_2 = 1`: the basis-permutation counts.
    pub fn basis_counts() -> Self {
        PRecurrence::new(
            vec![
                Polynomial::constant(1),
                Polynomial::new(vec![-4, 2]),
                Polynomial::new(vec![-5, 5, -1]),
            ],
            vec![BigInt::zero(), BigInt::zero(), BigInt::one()],
            3,
        )
        .expect("well-formed")
    }

    pub fn order(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn initial_values(&self) -> &[BigInt] {
        &self.init
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn first_index(&self) -> usize {
        self.offset - self.init.len()
    }

    /// Exact terms `u_first, …` (`count` of them).
    pub fn terms(&self, count: usize) -> Result<Vec<BigInt>, CongruenceError> {
        let r = self.order();
        let mut out: Vec<BigInt> = self.init.iter().take(count).cloned().collect();
        while out.len() < count {
            let n = self.first_index() + out.len();
            let k = out.len();
            let mut rhs = BigInt::zero();
            for i in 1..=r {
                rhs += self.polys[i].eval(n as i64) * &out[k - i];
            }
            let leading = self.polys[0].eval(n as i64);
            let (q, rem) = rhs.div_rem(&leading);
            if leading.is_zero() || !rem.is_zero() {
                return Err(CongruenceError::NotIntegral { n, leading, rhs });
            }
            out.push(q);
        }
        Ok(out)
    }
}

/// Integer literal that may be given as a JSON number or a decimal string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntLiteral {
    Number(i64),
    Text(String),
}

/// JSON schema for a recurrence: `{order, polys, init, offset}` where
/// `polys[i]` lists the coefficients of `P_i` from degree 0 up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecurrenceSpec {
    pub order: usize,
    pub polys: Vec<Vec<i64>>,
    pub init: Vec<IntLiteral>,
    pub offset: usize,
}

impl TryFrom<RecurrenceSpec> for PRecurrence {
    type Error = CongruenceError;

    fn try_from(spec: RecurrenceSpec) -> Result<Self, Self::Error> {
        if spec.polys.len() != spec.order + 1 {
            return Err(CongruenceError::OrderMismatch {
                declared: spec.order,
                polys: spec.polys.len(),
            });
        }
        let init = spec
            .init
            .into_iter()
            .map(|lit| match lit {
                IntLiteral::Number(v) => Ok(BigInt::from(v)),
                IntLiteral::Text(s) => s.trim().parse().map_err(|_| CongruenceError::BadLiteral(s)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        PRecurrence::new(
            spec.polys.into_iter().map(Polynomial::new).collect(),
            init,
            spec.offset,
        )
    }
}

impl From<&PRecurrence> for RecurrenceSpec {
    fn from(rec: &PRecurrence) -> Self {
        RecurrenceSpec {
            order: rec.order(),
            polys: rec.polys.iter().map(|p| p.coeffs.clone()).collect(),
            init: rec
                .init
                .iter()
                .map(|v| match v.to_i64() {
                    Some(x) => IntLiteral::Number(x),
                    None => IntLiteral::Text(v.to_string()),
                })
                .collect(),
            offset: rec.offset,
        }
    }
}

/// True when `P_0(n)` is a unit mod `m` for every `n` in one full coefficient
/// period `offset .. offset + m`. Constant `P_0` is checked once.
pub fn mod_step_check(rec: &PRecurrence, m: u64) -> bool {
    if m == 0 {
        return false;
    }
    let lead = &rec.polys[0];
    let span = if lead.coeffs.len() <= 1 { 1 } else { m };
    (0..span).all(|k| {
        let n = (rec.offset as u64 % m + k) % m;
        mod_inverse(lead.eval_mod(n, m), m).is_some()
    })
}

/// One step of the recurrence mod `m`. The state is the index of the next
/// term mod `m` together with the last `r` residues (oldest first).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct State {
    n_mod: u64,
    window: Vec<u64>,
}

struct Stepper<'a> {
    rec: &'a PRecurrence,
    m: u64,
    /// Row `n mod m` holds `P_i(n)·P_0(n)^{-1}` for `i = 1..=r`, or `None`
    /// when `P_0(n)` is not a unit.
    table: Option<Vec<Option<Vec<u64>>>>,
}

impl<'a> Stepper<'a> {
    fn new(rec: &'a PRecurrence, m: u64) -> Result<Self, CongruenceError> {
        if m == 0 {
            return Err(CongruenceError::InvalidModulus);
        }
        let mut s = Stepper {
            rec,
            m,
            table: None,
        };
        let r = rec.order() as u64;
        if m.saturating_mul(r + 1) <= TABLE_LIMIT {
            s.table = Some((0..m).map(|n| s.coefficients(n)).collect());
        }
        Ok(s)
    }

    fn coefficients(&self, n_mod: u64) -> Option<Vec<u64>> {
        let m = self.m;
        let inv = mod_inverse(self.rec.polys[0].eval_mod(n_mod, m), m)?;
        Some(
            self.rec.polys[1..]
                .iter()
                .map(|p| ((p.eval_mod(n_mod, m) as u128 * inv as u128) % m as u128) as u64)
                .collect(),
        )
    }

    fn initial_state(&self) -> State {
        let r = self.rec.order();
        let init = &self.rec.init;
        State {
            n_mod: self.rec.offset as u64 % self.m,
            window: init[init.len() - r..]
                .iter()
                .map(|v| reduce_big(v, self.m))
                .collect(),
        }
    }

    /// Advances `state` by one term and returns the new residue.
    fn step(&self, state: &mut State) -> Result<u64, CongruenceError> {
        let m = self.m;
        let owned;
        let coeffs: &[u64] = match &self.table {
            Some(t) => t[state.n_mod as usize].as_deref(),
            None => {
                owned = self.coefficients(state.n_mod);
                owned.as_deref()
            }
        }
        .ok_or(CongruenceError::NotInvertible {
            m,
            n_mod: state.n_mod,
        })?;
        let r = coeffs.len();
        let mut acc: u128 = 0;
        for (i, &c) in coeffs.iter().enumerate() {
            // u_{n-1-i} sits at window[r-1-i]
            acc = (acc + c as u128 * state.window[r - 1 - i] as u128) % m as u128;
        }
        let u = acc as u64;
        state.window.rotate_left(1);
        state.window[r - 1] = u;
        state.n_mod = (state.n_mod + 1) % m;
        Ok(u)
    }
}

/// Residues `u_i mod m` for consecutive indices, starting anywhere.
struct ResidueStream<'a> {
    stepper: &'a Stepper<'a>,
    state: State,
    pending: VecDeque<u64>,
}

impl<'a> ResidueStream<'a> {
    fn new(stepper: &'a Stepper<'a>) -> Self {
        ResidueStream {
            stepper,
            state: stepper.initial_state(),
            pending: stepper
                .rec
                .init
                .iter()
                .map(|v| reduce_big(v, stepper.m))
                .collect(),
        }
    }

    /// Stream positioned so the next residue is `u_start`.
    fn starting_at(stepper: &'a Stepper<'a>, start: u64) -> Result<Self, CongruenceError> {
        let mut s = ResidueStream::new(stepper);
        let first = stepper.rec.first_index() as u64;
        for _ in first..start {
            s.next_residue()?;
        }
        Ok(s)
    }

    fn next_residue(&mut self) -> Result<u64, CongruenceError> {
        match self.pending.pop_front() {
            Some(v) => Ok(v),
            None => self.stepper.step(&mut self.state),
        }
    }
}

/// `u_first, …` reduced mod `m` (`count` terms), in O(r) memory beyond the
/// output.
pub fn mod_sequence(rec: &PRecurrence, m: u64, count: usize) -> Result<Vec<u64>, CongruenceError> {
    let stepper = Stepper::new(rec, m)?;
    let mut stream = ResidueStream::new(&stepper);
    (0..count).map(|_| stream.next_residue()).collect()
}

#[derive(Debug, Clone)]
pub struct PeriodOptions {
    pub max_steps: u64,
    /// Keep one full cycle of residues in the report.
    pub keep_cycle: bool,
}

impl Default for PeriodOptions {
    fn default() -> Self {
        PeriodOptions {
            max_steps: DEFAULT_MAX_STEPS,
            keep_cycle: true,
        }
    }
}

/// Stages reported to a progress callback.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    CycleLength,
    CycleStart,
    MinimalPeriod,
    Preperiod,
    Verify,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongruenceReport {
    pub m: u64,
    /// First index from which `u_{n+period} ≡ u_n` holds.
    pub preperiod: u64,
    /// Minimal eventual period of the residues.
    pub period: u64,
    /// `u_preperiod, …, u_{preperiod+period-1}` mod `m`, when kept.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycle: Option<Vec<u64>>,
    pub verified: bool,
    /// Cycle length of the full state, a multiple of `period`.
    #[serde(skip)]
    pub state_period: u64,
}

pub fn detect_period(rec: &PRecurrence, m: u64) -> Result<CongruenceReport, CongruenceError> {
    detect_period_with(rec, m, &PeriodOptions::default(), &mut |_, _| {})
}

/// Cycle detection followed by minimal-period reduction and verification.
///
/// `progress` is called with the current phase and a step count roughly
/// every 2^24 steps, and once at the start of each phase.
pub fn detect_period_with(
    rec: &PRecurrence,
    m: u64,
    opts: &PeriodOptions,
    progress: &mut dyn FnMut(Phase, u64),
) -> Result<CongruenceReport, CongruenceError> {
    if m == 0 {
        return Err(CongruenceError::InvalidModulus);
    }
    if !mod_step_check(rec, m) {
        let lead = &rec.polys[0];
        let n_mod = (0..m)
            .find(|&n| mod_inverse(lead.eval_mod(n, m), m).is_none())
            .unwrap_or(0);
        return Err(CongruenceError::NotInvertible { m, n_mod });
    }
    let stepper = Stepper::new(rec, m)?;
    let r = rec.order() as u64;
    let (lambda, mu) = brent(&stepper, opts.max_steps, progress)?;

    // States repeat from step mu on; the state holds the previous r residues,
    // so the residues repeat from index offset + mu - r on.
    let periodic_from = rec.offset as u64 + mu - r;

    progress(Phase::MinimalPeriod, 0);
    let mut period = lambda;
    for q in prime_factors(lambda) {
        while period % q == 0 && is_period(&stepper, periodic_from, period / q, lambda)? {
            period /= q;
        }
    }

    progress(Phase::Preperiod, 0);
    let first = rec.first_index() as u64;
    let mut a = ResidueStream::starting_at(&stepper, first)?;
    let mut b = ResidueStream::starting_at(&stepper, first + period)?;
    let mut preperiod = first;
    for i in first..periodic_from {
        if a.next_residue()? != b.next_residue()? {
            preperiod = i + 1;
        }
    }

    let cycle = if opts.keep_cycle {
        let mut s = ResidueStream::starting_at(&stepper, preperiod)?;
        Some(
            (0..period)
                .map(|_| s.next_residue())
                .collect::<Result<Vec<_>, _>>()?,
        )
    } else {
        None
    };

    progress(Phase::Verify, 0);
    let verified = is_period(&stepper, preperiod, period, lambda + r)?;

    Ok(CongruenceReport {
        m,
        preperiod,
        period,
        cycle,
        verified,
        state_period: lambda,
    })
}

/// Brent's cycle detection on the state map; returns `(λ, μ)` in steps from
/// the initial state.
fn brent(
    stepper: &Stepper<'_>,
    max_steps: u64,
    progress: &mut dyn FnMut(Phase, u64),
) -> Result<(u64, u64), CongruenceError> {
    const REPORT_MASK: u64 = (1 << 24) - 1;
    let x0 = stepper.initial_state();
    let mut steps = 0u64;
    let tick = |steps: &mut u64, phase: Phase, progress: &mut dyn FnMut(Phase, u64)| {
        *steps += 1;
        if *steps > max_steps {
            return Err(CongruenceError::BudgetExceeded(max_steps));
        }
        if *steps & REPORT_MASK == 0 {
            progress(phase, *steps);
        }
        Ok(())
    };

    progress(Phase::CycleLength, 0);
    let mut power = 1u64;
    let mut lambda = 1u64;
    let mut tortoise = x0.clone();
    let mut hare = x0.clone();
    stepper.step(&mut hare)?;
    tick(&mut steps, Phase::CycleLength, progress)?;
    while tortoise != hare {
        if power == lambda {
            tortoise.clone_from(&hare);
            power *= 2;
            lambda = 0;
        }
        stepper.step(&mut hare)?;
        tick(&mut steps, Phase::CycleLength, progress)?;
        lambda += 1;
    }

    progress(Phase::CycleStart, steps);
    let mut tortoise = x0.clone();
    let mut hare = x0;
    for _ in 0..lambda {
        stepper.step(&mut hare)?;
        tick(&mut steps, Phase::CycleStart, progress)?;
    }
    let mut mu = 0u64;
    while tortoise != hare {
        stepper.step(&mut tortoise)?;
        stepper.step(&mut hare)?;
        tick(&mut steps, Phase::CycleStart, progress)?;
        mu += 1;
    }
    Ok((lambda, mu))
}

/// `u_{i+d} ≡ u_i` for `i` in `start .. start + window`.
fn is_period(
    stepper: &Stepper<'_>,
    start: u64,
    d: u64,
    window: u64,
) -> Result<bool, CongruenceError> {
    let mut a = ResidueStream::starting_at(stepper, start)?;
    let mut b = ResidueStream::starting_at(stepper, start + d)?;
    for _ in 0..window {
        if a.next_residue()? != b.next_residue()? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2u64;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The first `count` exact terms reduced mod `m`. Slow; a reference for
/// [`mod_sequence`].
pub fn exact_residues(
    rec: &PRecurrence,
    m: u64,
    count: usize,
) -> Result<Vec<u64>, CongruenceError> {
    if m == 0 {
        return Err(CongruenceError::InvalidModulus);
    }
    let m_big = BigInt::from(m);
    Ok(rec
        .terms(count)?
        .iter()
        .map(|v| {
            let r = v.mod_floor(&m_big);
            debug_assert!(!r.is_negative());
            r.to_u64().unwrap()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec_with_leading(lead: Vec<i64>) -> PRecurrence {
        PRecurrence::new(
            vec![Polynomial::new(lead), Polynomial::constant(1)],
            vec![BigInt::one()],
            1,
        )
        .unwrap()
    }

    #[test]
    fn step_check() {
        let b = PRecurrence::basis_counts();
        for m in [1, 2, 15, 3617, 1 << 40] {
            assert!(mod_step_check(&b, m));
        }
        assert!(!mod_step_check(&rec_with_leading(vec![0, 1]), 6));
        assert!(mod_step_check(&rec_with_leading(vec![1, 2]), 4));
        assert!(!mod_step_check(&rec_with_leading(vec![1, 2]), 6));
        assert!(!mod_step_check(&b, 0));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            PRecurrence::new(vec![Polynomial::constant(1)], vec![], 0),
            Err(CongruenceError::NoOrder)
        );
        assert_eq!(
            PRecurrence::new(
                vec![Polynomial::new(vec![0, 0]), Polynomial::constant(1)],
                vec![BigInt::one()],
                1
            ),
            Err(CongruenceError::ZeroLeading)
        );
        assert!(matches!(
            PRecurrence::new(vec![Polynomial::constant(1); 3], vec![BigInt::one()], 1),
            Err(CongruenceError::TooFewInitial { .. })
        ));
        assert!(matches!(
            PRecurrence::new(vec![Polynomial::constant(1); 2], vec![BigInt::one(); 2], 1),
            Err(CongruenceError::BadOffset { .. })
        ));
    }

    #[test]
    fn exact_terms() {
        let t = PRecurrence::basis_counts().terms(10).unwrap();
        let expected: Vec<BigInt> = [0, 0, 1, 2, 7, 32, 179, 1182, 8993, 77440]
            .map(BigInt::from)
            .to_vec();
        assert_eq!(t, expected);
        // n·u_n = u_{n-1}: u_n = 1/n! is not integral
        let rec = rec_with_leading(vec![0, 1]);
        assert!(matches!(
            rec.terms(3),
            Err(CongruenceError::NotIntegral { .. })
        ));
    }

    #[test]
    fn sequence_mod_15() {
        let s = mod_sequence(&PRecurrence::basis_counts(), 15, 21).unwrap();
        assert_eq!(&s[9..], &[10, 5, 10, 10, 0, 10, 5, 10, 5, 5, 0, 5]);
        assert!(mod_sequence(&PRecurrence::basis_counts(), 1, 30)
            .unwrap()
            .iter()
            .all(|&v| v == 0));
        assert_eq!(
            &mod_sequence(&PRecurrence::basis_counts(), 2, 8).unwrap()[2..],
            &[1, 0, 1, 0, 1, 0]
        );
        assert!(mod_sequence(&rec_with_leading(vec![0, 1]), 6, 10).is_err());
    }

    #[test]
    fn period_mod_15() {
        let rep = detect_period(&PRecurrence::basis_counts(), 15).unwrap();
        assert_eq!(rep.period, 12);
        assert_eq!(rep.preperiod, 9);
        assert_eq!(
            rep.cycle.as_deref(),
            Some(&[10, 5, 10, 10, 0, 10, 5, 10, 5, 5, 0, 5][..])
        );
        assert!(rep.verified);
        assert_eq!(rep.state_period % rep.period, 0);
    }

    #[test]
    fn period_mod_1() {
        let rep = detect_period(&PRecurrence::basis_counts(), 1).unwrap();
        assert_eq!((rep.period, rep.cycle.clone()), (1, Some(vec![0])));
        assert!(rep.verified);
    }

    #[test]
    fn budget_is_enforced() {
        let opts = PeriodOptions {
            max_steps: 10,
            keep_cycle: false,
        };
        let err = detect_period_with(&PRecurrence::basis_counts(), 3617, &opts, &mut |_, _| {});
        assert_eq!(err, Err(CongruenceError::BudgetExceeded(10)));
    }

    #[test]
    fn non_invertible_leading() {
        let err = detect_period(&rec_with_leading(vec![0, 1]), 6);
        assert!(matches!(
            err,
            Err(CongruenceError::NotInvertible { m: 6, .. })
        ));
    }

    #[test]
    fn fibonacci_pisano() {
        let fib = PRecurrence::new(
            vec![
                Polynomial::constant(1),
                Polynomial::constant(1),
                Polynomial::constant(1),
            ],
            vec![BigInt::zero(), BigInt::one()],
            2,
        )
        .unwrap();
        for (m, pisano) in [(2, 3), (3, 8), (10, 60), (11, 10)] {
            let rep = detect_period(&fib, m).unwrap();
            assert_eq!((rep.period, rep.preperiod), (pisano, 0), "m={m}");
        }
    }

    #[test]
    fn spec_round_trip() {
        let rec = PRecurrence::basis_counts();
        let spec = RecurrenceSpec::from(&rec);
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(
            json,
            r#"{"order":2,"polys":[[1],[-4,2],[-5,5,-1]],"init":[0,0,1],"offset":3}"#
        );
        let back: RecurrenceSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(PRecurrence::try_from(back).unwrap(), rec);
        let big: RecurrenceSpec = serde_json::from_str(
            r#"{"order":1,"polys":[[1],[2]],"init":["123456789012345678901234567890"],"offset":1}"#,
        )
        .unwrap();
        assert!(PRecurrence::try_from(big).is_ok());
        let bad: RecurrenceSpec =
            serde_json::from_str(r#"{"order":2,"polys":[[1],[2]],"init":[1,1],"offset":2}"#)
                .unwrap();
        assert!(PRecurrence::try_from(bad).is_err());
    }

    #[test]
    fn factors() {
        assert_eq!(prime_factors(26158144), vec![2, 113, 3617]);
        assert_eq!(prime_factors(1), Vec::<u64>::new());
        assert_eq!(prime_factors(60), vec![2, 3, 5]);
    }
}
