//! Numerical evaluation of the Dirichlet series and local Euler factors
//! attached to the field, and the main-term coefficients of
//! M(x) = x^4 (c1 log x + c0) from the order-2 pole at s = 4.
//!
//! Everything is evaluated at real arguments only. Writing
//! F(s) = sum 16 a_K^2(n) g(n) n^{-s} = zeta^2(s-3) H(s), the Laurent
//! expansion zeta(w) = 1/(w-1) + gamma + O(w-1) gives
//! c1 = H(4)/4 and c0 = (gamma/2) H(4) + (H(s)/s)'(4).

use crate::arith::{primes_up_to, ArithError, SieveTable};
use crate::field::{ClassData, CubicField, SplittingCode, SplittingTable};
use core::fmt;

/// Euler-Mascheroni constant, 20 digits.
pub const EULER_GAMMA: f64 = 0.57721566490153286061;

#[derive(Debug, Clone, PartialEq)]
pub enum SeriesError {
    /// zeta requested at or left of its pole.
    Pole { s: f64 },
    /// A truncation tail bound fails to contract.
    Divergent { what: &'static str, s: f64 },
    /// A smoothing or differentiation sweep never met its tolerance.
    NotStabilized { what: &'static str },
    /// Coefficient generation overflowed.
    Coefficient(ArithError),
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::Pole { s } => write!(f, "zeta has a pole at s = 1 (requested s = {s})"),
            SeriesError::Divergent { what, s } => {
                write!(f, "{what} does not converge at s = {s}")
            }
            SeriesError::NotStabilized { what } => {
                write!(f, "{what}: convergence sweep failed to stabilize")
            }
            SeriesError::Coefficient(e) => write!(f, "coefficient generation failed: {e}"),
        }
    }
}

impl core::error::Error for SeriesError {}

impl From<ArithError> for SeriesError {
    fn from(e: ArithError) -> Self {
        SeriesError::Coefficient(e)
    }
}

/// How a numerical value was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMethod {
    EulerProduct,
    DirichletSum,
    SmoothedSum,
    ClosedForm,
}

/// A value with its truncation provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerEval {
    pub value: f64,
    pub prime_cutoff: u64,
    pub tail_estimate: f64,
    pub method: EvalMethod,
}

/// A truncated local (single-prime) evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalEval {
    pub value: f64,
    pub tail_estimate: f64,
    pub depth: u32,
}

// ---------------------------------------------------------------------------
// zeta
// ---------------------------------------------------------------------------

/// Riemann zeta at real s > 1 by Euler-Maclaurin: direct sum to N, an
/// integral tail, and Bernoulli corrections. Absolute error well below
/// 1e-10 for s >= 1.1 and still sharp near the pole.
pub fn zeta_real(s: f64) -> Result<f64, SeriesError> {
    if s <= 1.0 {
        return Err(SeriesError::Pole { s });
    }
    const N: u32 = 64;
    let nf = N as f64;
    let mut sum = 0.0f64;
    for n in 1..N {
        sum += libm::pow(n as f64, -s);
    }
    let npow = libm::pow(nf, -s);
    sum += nf * npow / (s - 1.0); // integral tail N^{1-s}/(s-1)
    sum += 0.5 * npow;
    // B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
    const B2K_OVER_FACT: [f64; 5] = [
        1.0 / 12.0,        // B2/2!
        -1.0 / 720.0,      // B4/4!
        1.0 / 30240.0,     // B6/6!
        -1.0 / 1209600.0,  // B8/8!
        1.0 / 47900160.0,  // B10/10!
    ];
    let mut rising = s; // s(s+1)...(s+2k-2), starts at k=1 with just s
    let mut npow_shift = npow / nf; // N^{-s-2k+1}, k=1
    for (k, &coeff) in B2K_OVER_FACT.iter().enumerate() {
        sum += coeff * rising * npow_shift;
        rising *= (s + 2.0 * k as f64 + 1.0) * (s + 2.0 * k as f64 + 2.0);
        npow_shift /= nf * nf;
    }
    Ok(sum)
}

// ---------------------------------------------------------------------------
// L-functions of f and sym^2 f
// ---------------------------------------------------------------------------

fn sieve_coeffs(table: &SplittingTable, sym2: bool, limit: u64) -> Result<SieveTable, SeriesError> {
    let spec = if sym2 {
        table.spec_lambda_sym2()
    } else {
        table.spec_lambda_f()
    };
    Ok(crate::arith::sieve_multiplicative(&spec, limit, 1 << 18)?)
}

/// Direct Dirichlet sum with a divisor-bound tail estimate; for s > 1.5.
fn direct_sum(coeffs: &SieveTable, s: f64) -> (f64, f64) {
    let n = coeffs.limit();
    let mut sum = 0.0f64;
    for m in 1..=n {
        let c = coeffs.get(m);
        if c != 0 {
            sum += c as f64 * libm::pow(m as f64, -s);
        }
    }
    // |coefficients| <= d_3(n) in the worst case; a serviceable bound on
    // the tail is (log N + 2)^2 N^{1-s}/(s-1)
    let nf = n as f64;
    let lg = libm::log(nf) + 2.0;
    let tail = lg * lg * libm::pow(nf, 1.0 - s) / (s - 1.0);
    (sum, tail)
}

/// Exponentially smoothed sum sum a(n) e^{-n/X} n^{-s}, swept over
/// doubling X until two successive estimates differ by < 1e-3 (they
/// typically agree far better). Valid down to s = 1 because the
/// L-functions are entire there.
fn smoothed_sum(coeffs: &SieveTable, s: f64, what: &'static str) -> Result<(f64, f64), SeriesError> {
    let n = coeffs.limit();
    // e^{-n/X} < 1e-18 once n > 42 X
    let x_max = n / 42;
    let mut x = (x_max / 32).max(500);
    let mut prev: Option<f64> = None;
    while x <= x_max {
        let inv_x = 1.0 / x as f64;
        let m = 42 * x;
        let mut sum = 0.0f64;
        for k in 1..=m.min(n) {
            let c = coeffs.get(k);
            if c != 0 {
                let kf = k as f64;
                sum += c as f64 * libm::exp(-kf * inv_x) * libm::pow(kf, -s);
            }
        }
        if let Some(p) = prev {
            let diff = (sum - p).abs();
            if diff < 1e-3 {
                return Ok((sum, diff));
            }
        }
        prev = Some(sum);
        x *= 2;
    }
    Err(SeriesError::NotStabilized { what })
}

// Both L-functions are entire, so the smoothed evaluator is valid a
// little below s = 1 as well; the main-term derivative needs s-3 = 1-h.
fn eval_l(coeffs: &SieveTable, s: f64, what: &'static str) -> Result<EulerEval, SeriesError> {
    if s > 1.5 {
        let (value, tail_estimate) = direct_sum(coeffs, s);
        Ok(EulerEval {
            value,
            prime_cutoff: coeffs.limit(),
            tail_estimate,
            method: EvalMethod::DirichletSum,
        })
    } else if s >= 0.9 {
        let (value, tail_estimate) = smoothed_sum(coeffs, s, what)?;
        Ok(EulerEval {
            value,
            prime_cutoff: coeffs.limit(),
            tail_estimate,
            method: EvalMethod::SmoothedSum,
        })
    } else {
        Err(SeriesError::Divergent { what, s })
    }
}

/// L(s, f) = sum lambda_f(n) n^{-s}, s >= 1.
pub fn l_f(table: &SplittingTable, s: f64, cutoff: u64) -> Result<EulerEval, SeriesError> {
    if s < 1.0 {
        return Err(SeriesError::Divergent { what: "L(s,f)", s });
    }
    let coeffs = sieve_coeffs(table, false, cutoff)?;
    eval_l(&coeffs, s, "L(s,f)")
}

/// L(s, sym^2 f) = sum lambda_{sym^2 f}(n) n^{-s}, s >= 1.
pub fn l_sym2(table: &SplittingTable, s: f64, cutoff: u64) -> Result<EulerEval, SeriesError> {
    if s < 1.0 {
        return Err(SeriesError::Divergent { what: "L(s,sym2 f)", s });
    }
    let coeffs = sieve_coeffs(table, true, cutoff)?;
    eval_l(&coeffs, s, "L(s,sym2 f)")
}

/// Closed-form L(1,f) from the residue of the Dedekind zeta function:
/// 2^{r1} (2 pi)^{r2} h R / (omega sqrt|D_K|).
pub fn l1f_classnumber(field: &CubicField, cd: &ClassData) -> f64 {
    let two_pi = core::f64::consts::TAU;
    libm::pow(2.0, cd.r1 as f64) * libm::pow(two_pi, cd.r2 as f64) * cd.h as f64 * cd.regulator
        / (cd.omega as f64 * libm::sqrt(field.abs_disc() as f64))
}

// ---------------------------------------------------------------------------
// local factors
// ---------------------------------------------------------------------------

/// Local sum sum_k a_K(p^k)^2 * kernel(p^k) * p^{-sk} truncated at
/// `depth`, where the kernel is 1 + p^3 + ... + p^{3k} (the odd-prime
/// form of g, used verbatim at p = 2 as well when `true_even` is
/// false). With `true_even`, p = 2 uses the genuine g(2^k), which
/// differs from the kernel by exactly -2.
fn local_sum(
    code: SplittingCode,
    p: u64,
    s: f64,
    depth: u32,
    true_even: bool,
    what: &'static str,
) -> Result<LocalEval, SeriesError> {
    let pf = p as f64;
    let q = libm::pow(pf, 3.0 - s); // ratio of successive kernel peaks
    let r3 = 1.0 / (pf * pf * pf);
    let geom = 1.0 / (1.0 - r3);
    let ps = libm::pow(pf, -s);
    // kernel(p^k) p^{-sk} = q^k (1 - r3^{k+1}) / (1 - r3)
    let mut qk = 1.0f64;
    let mut r3k1 = r3;
    let mut psk = 1.0f64;
    let mut sum = 0.0f64;
    for k in 0..=depth {
        let ak = code.ak_prime_power(k) as f64;
        if ak != 0.0 {
            let mut kernel = qk * (1.0 - r3k1) * geom;
            if true_even && p == 2 && k >= 1 {
                kernel -= 2.0 * psk; // g(2^k) = (1 + 8 + ... + 8^k) - 2 for k >= 1
            }
            sum += ak * ak * kernel;
        }
        qk *= q;
        r3k1 *= r3;
        psk *= ps;
    }
    // tail: a_K(p^k) <= (k+1)(k+2)/2, kernel <= q^k/(1-r3);
    // successive bound ratio r = q ((k+2)(k+3)/((k+1)(k+2)))^2
    let k1 = (depth + 1) as f64;
    let bound_ratio = q * ((k1 + 2.0) / (k1 + 1.0)) * ((k1 + 2.0) / (k1 + 1.0));
    if bound_ratio >= 1.0 {
        return Err(SeriesError::Divergent { what, s });
    }
    let first = {
        let d = (k1 + 1.0) * (k1 + 2.0) / 2.0;
        d * d * qk * geom
    };
    Ok(LocalEval {
        value: sum,
        tail_estimate: first / (1.0 - bound_ratio),
        depth,
    })
}

/// A_p(s) = 1 + a_K^2(p) g(p) p^{-s} + a_K^2(p^2) g(p^2) p^{-2s} + ...,
/// truncated at `depth`, with the odd-prime kernel used at every p
/// (at p = 2 this is the pretend series whose correction is
/// [`a2_b2_ratio`]).
pub fn a_p(table: &SplittingTable, p: u64, s: f64, depth: u32) -> Result<LocalEval, SeriesError> {
    local_sum(table.code(p), p, s, depth, false, "A_p(s)")
}

/// B_2(s)/A_2(s): the genuine even local series over the pretend one,
/// both truncated at the same depth. Lies in (0, 1] for real s > 3.5.
pub fn a2_b2_ratio(table: &SplittingTable, s: f64, depth: u32) -> Result<f64, SeriesError> {
    if s <= 3.5 {
        return Err(SeriesError::Divergent {
            what: "B_2(s)/A_2(s)",
            s,
        });
    }
    let code = table.code(2);
    let b2 = local_sum(code, 2, s, depth, true, "B_2(s)")?;
    let a2 = local_sum(code, 2, s, depth, false, "A_2(s)")?;
    Ok(b2.value / a2.value)
}

/// Inverse of the local factor at p of
/// zeta^2(w) L^2(w,f) L(w,sym^2 f), evaluated at x = p^{-w}.
/// The L-factors come straight from the splitting type; unramified
/// primes have Satake parameters with alpha beta = 1, ramified ones
/// (alpha, beta) = (lambda_f(p), 0).
fn euler_block_inverse(code: SplittingCode, x: f64) -> f64 {
    let zeta_inv = (1.0 - x) * (1.0 - x);
    let lf_inv = match code {
        SplittingCode::Inert => 1.0 + x + x * x,
        SplittingCode::Split => (1.0 - x) * (1.0 - x),
        SplittingCode::Partial => 1.0 - x * x,
        SplittingCode::TotallyRamified => 1.0,
        SplittingCode::Ramified21 => 1.0 - x,
    };
    let sym2_inv = match code {
        // 1 - e1 x + e1 x^2 - x^3 with e1 = lambda_f(p)^2 - 1
        SplittingCode::Inert | SplittingCode::Split | SplittingCode::Partial => {
            let lam = code.lambda_f_prime_power(1) as f64;
            let e1 = lam * lam - 1.0;
            1.0 - e1 * x + e1 * x * x - x * x * x
        }
        // 1 - lambda_f(p)^2 x
        SplittingCode::TotallyRamified => 1.0,
        SplittingCode::Ramified21 => 1.0 - x,
    };
    zeta_inv * lf_inv * lf_inv * sym2_inv
}

fn b_local_code(code: SplittingCode, p: u64, s: f64, depth: u32) -> Result<f64, SeriesError> {
    if depth == 0 {
        return Ok(1.0); // a depth-0 truncation carries no information
    }
    let a = local_sum(code, p, s, depth, false, "B_p(s)")?;
    let xw = libm::pow(p as f64, 3.0 - s); // p^{-(s-3)}
    let xs = libm::pow(p as f64, -s);
    Ok(a.value * euler_block_inverse(code, xw) * euler_block_inverse(code, xs))
}

/// The harmless local correction at an odd prime:
/// B_p(s) = A_p(s) x [local factor at p of
/// zeta^2(s-3) L^2(s-3,f) L(s-3,sym^2 f) zeta^2(s) L^2(s,f) L(s,sym^2 f)]^{-1}.
pub fn b_local(table: &SplittingTable, p: u64, s: f64, depth: u32) -> Result<f64, SeriesError> {
    debug_assert!(p % 2 == 1, "B_p is defined at odd primes; the even place enters via b_even_pretend");
    b_local_code(table.code(p), p, s, depth)
}

/// The even-place counterpart: the pretend series A_2 divided by its
/// own local Euler block. The factorization
/// F(s) = 16 (B_2/A_2)(s) zeta^2(s-3) L^2 L_sym2 zeta^2 L^2 L_sym2 B(s)
/// is exact only if B(s) carries this factor as well — the global
/// L-functions contain their p = 2 factors, and A_2 must cancel
/// against them like every other place.
pub fn b_even_pretend(table: &SplittingTable, s: f64, depth: u32) -> Result<f64, SeriesError> {
    b_local_code(table.code(2), 2, s, depth)
}

/// Product of B_p(s) over odd p <= prime_cutoff, times the even-place
/// pretend factor. Converges for s > 3.5.
pub fn b_product(
    table: &SplittingTable,
    s: f64,
    prime_cutoff: u64,
    depth: u32,
) -> Result<EulerEval, SeriesError> {
    let mut product = b_even_pretend(table, s, depth)?;
    let mut last_decade = 1.0f64;
    for p in primes_up_to(prime_cutoff) {
        if p == 2 {
            continue;
        }
        let bp = b_local(table, p, s, depth)?;
        product *= bp;
        if 2 * p > prime_cutoff {
            last_decade *= bp;
        }
    }
    Ok(EulerEval {
        value: product,
        prime_cutoff,
        // log-increment over the last octave of primes, a Cauchy proxy
        tail_estimate: libm::fabs(libm::log(last_decade)),
        method: EvalMethod::EulerProduct,
    })
}

// ---------------------------------------------------------------------------
// main-term coefficients
// ---------------------------------------------------------------------------

/// Every constituent of the residue computation, recorded for audit.
#[derive(Debug, Clone, PartialEq)]
pub struct MainTermInputs {
    pub zeta_4: f64,
    pub l_1_f: f64,
    pub l_1_sym2: f64,
    pub l_4_f: f64,
    pub l_4_sym2: f64,
    pub ratio_b2_a2: f64,
    pub b_product: f64,
    pub b_tail: f64,
    pub h_at_4: f64,
    pub euler_gamma: f64,
    pub diff_step: f64,
    pub prime_cutoff: u64,
    pub coeff_cutoff: u64,
}

/// Coefficients of the main term M(x) = x^4 (c1 log x + c0).
#[derive(Debug, Clone, PartialEq)]
pub struct MainTermCoeffs {
    pub c1: f64,
    pub c0: f64,
    pub inputs: MainTermInputs,
}

impl MainTermCoeffs {
    pub fn main_term(&self, x: f64) -> f64 {
        let x4 = x * x * x * x;
        x4 * (self.c1 * libm::log(x) + self.c0)
    }
}

const COEFF_CUTOFF: u64 = 1_600_000;
const LOCAL_DEPTH: u32 = 96;

/// H(s) = F(s)/zeta^2(s-3), assembled from its factorization.
fn h_of_s(
    table: &SplittingTable,
    lam_f: &SieveTable,
    lam_s2: &SieveTable,
    s: f64,
    prime_cutoff: u64,
) -> Result<f64, SeriesError> {
    let w = s - 3.0;
    let lf_w = eval_l(lam_f, w, "L(s-3,f)")?.value;
    let ls2_w = eval_l(lam_s2, w, "L(s-3,sym2 f)")?.value;
    let z_s = zeta_real(s)?;
    let lf_s = eval_l(lam_f, s, "L(s,f)")?.value;
    let ls2_s = eval_l(lam_s2, s, "L(s,sym2 f)")?.value;
    let ratio = a2_b2_ratio(table, s, LOCAL_DEPTH)?;
    let b = b_product(table, s, prime_cutoff, LOCAL_DEPTH)?.value;
    Ok(16.0 * ratio * lf_w * lf_w * ls2_w * z_s * z_s * lf_s * lf_s * ls2_s * b)
}

/// c1 = H(4)/4 and c0 = (gamma/2) H(4) + (H(s)/s)'(4), the derivative by
/// central differences with a step sweep (0.01, 0.001, then halving)
/// until two successive c0 values agree to 1e-4.
pub fn main_term_coeffs(
    table: &SplittingTable,
    prime_cutoff: u64,
) -> Result<MainTermCoeffs, SeriesError> {
    let lam_f = sieve_coeffs(table, false, COEFF_CUTOFF)?;
    let lam_s2 = sieve_coeffs(table, true, COEFF_CUTOFF)?;
    let h4 = h_of_s(table, &lam_f, &lam_s2, 4.0, prime_cutoff)?;
    let c1 = h4 / 4.0;

    let h_over_s = |s: f64| -> Result<f64, SeriesError> {
        Ok(h_of_s(table, &lam_f, &lam_s2, s, prime_cutoff)? / s)
    };
    let mut h_step = 0.01f64;
    let mut prev: Option<(f64, f64)> = None; // (step, c0)
    let constant_part = 0.5 * EULER_GAMMA * h4;
    for iteration in 0..8 {
        let deriv = (h_over_s(4.0 + h_step)? - h_over_s(4.0 - h_step)?) / (2.0 * h_step);
        let c0 = constant_part + deriv;
        if let Some((_, p)) = prev {
            if (c0 - p).abs() < 1e-4 {
                let b = b_product(table, 4.0, prime_cutoff, LOCAL_DEPTH)?;
                let inputs = MainTermInputs {
                    zeta_4: zeta_real(4.0)?,
                    l_1_f: eval_l(&lam_f, 1.0, "L(1,f)")?.value,
                    l_1_sym2: eval_l(&lam_s2, 1.0, "L(1,sym2 f)")?.value,
                    l_4_f: eval_l(&lam_f, 4.0, "L(4,f)")?.value,
                    l_4_sym2: eval_l(&lam_s2, 4.0, "L(4,sym2 f)")?.value,
                    ratio_b2_a2: a2_b2_ratio(table, 4.0, LOCAL_DEPTH)?,
                    b_product: b.value,
                    b_tail: b.tail_estimate,
                    h_at_4: h4,
                    euler_gamma: EULER_GAMMA,
                    diff_step: h_step,
                    prime_cutoff,
                    coeff_cutoff: COEFF_CUTOFF,
                };
                debug_assert!(c1 > 0.0);
                return Ok(MainTermCoeffs { c1, c0, inputs });
            }
        }
        prev = Some((h_step, c0));
        h_step = if iteration == 0 { 0.001 } else { h_step * 0.5 };
    }
    Err(SeriesError::NotStabilized {
        what: "c0 differentiation step sweep",
    })
}
