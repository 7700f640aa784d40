//! Minimum-size piecewise-linear covers of concave penalty sequences.
//!
//! Given penalties `w(0..=r)` and a tolerance `eps`, a *cover* is a set of
//! lines that all upper-bound `w` at every integer, such that at each integer
//! some line stays within `(1+eps)·w`. The lower envelope of the cover is a
//! concave piecewise-linear function sandwiched between `w` and `(1+eps)·w`,
//! and each slope drop of the envelope corresponds to one cut gadget.
//! [`find_best_cover`] builds a cover whose positive-slope line count is
//! minimal; [`clique_cover`] specializes to the quadratic penalty `x(k-x)`
//! with tangent lines so that the piece count depends only on `eps`, not `k`.
//!
//! The greedy step ([`find_next`]) covers the leftmost uncovered index `ell`
//! and reaches as far right as any feasible line can. Writing `M_j` for the
//! slope of the chord joining `(j, w(j))` and `(j+1, w(j+1))`, the chosen
//! line pivots on the first point `q` whose incoming chord overshoots
//! `(1+eps)·w(ell)`: the line through `(ell, (1+eps)w(ell))` and `(q, w(q))`
//! has slope in `(M_q, M_{q-1}]`, so it still upper-bounds `w` everywhere,
//! and any feasible line of smaller slope would break the bound at `ell`.

use crate::splitting::{GscbFunction, ScbFunction};
use crate::{le_cover, Error, Result};

/// A line `y = slope * x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub slope: f64,
    pub intercept: f64,
}

impl Line {
    pub fn new(slope: f64, intercept: f64) -> Self {
        Line { slope, intercept }
    }

    pub fn constant(c: f64) -> Self {
        Line { slope: 0.0, intercept: c }
    }

    /// The line through `(x0, y0)` and `(x1, y1)`, `x0 != x1`.
    pub fn through(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        let slope = (y1 - y0) / (x1 - x0);
        Line { slope, intercept: y0 - slope * x0 }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }

    /// x-coordinate where two non-parallel lines meet.
    fn intersect_x(&self, other: &Line) -> f64 {
        (other.intercept - self.intercept) / (self.slope - other.slope)
    }
}

/// A cover stored as its lines, sorted by strictly decreasing slope.
#[derive(Debug, Clone, PartialEq)]
pub struct PlCover {
    pub lines: Vec<Line>,
    /// `r` for symmetric covers, `k` for generalized ones.
    pub domain_end: usize,
}

impl PlCover {
    pub fn empty(domain_end: usize) -> Self {
        PlCover { lines: Vec::new(), domain_end }
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Lower envelope `min_g g(x)`; zero for the empty cover.
    pub fn envelope(&self, x: f64) -> f64 {
        if self.lines.is_empty() {
            return 0.0;
        }
        self.lines.iter().map(|g| g.eval(x)).fold(f64::INFINITY, f64::min)
    }

    /// Number of positive-slope lines, i.e. the CB-gadget count.
    pub fn positive_pieces(&self) -> usize {
        self.lines.iter().filter(|g| g.slope > 0.0).count()
    }
}

/// Chord through `(i, w(i))` and `(i+1, w(i+1))`, evaluated at `x`.
fn chord_eval(w: &[f64], i: usize, x: f64) -> f64 {
    let m = w[i + 1] - w[i];
    m * (x - i as f64) + w[i]
}

fn chord(w: &[f64], i: usize) -> Line {
    let m = w[i + 1] - w[i];
    Line { slope: m, intercept: w[i] - m * i as f64 }
}

/// Extends coverage of `line` rightward from `from`, up to `end`.
fn extend_coverage(w: &[f64], eps: f64, line: &Line, from: usize, end: usize) -> usize {
    let mut p = from;
    while p + 1 <= end && le_cover(line.eval((p + 1) as f64), (1.0 + eps) * w[p + 1]) {
        p += 1;
    }
    p
}

/// Largest `j` in `[ell, end-1]` whose chord, extended back to `ell`, stays
/// within `target`. The chord value at `ell` is nondecreasing in `j` by
/// concavity, so the boundary is found by bisection; `j = ell` always
/// qualifies since that chord passes through `(ell, w(ell))`.
fn last_feasible_chord(w: &[f64], ell: usize, end: usize, target: f64) -> usize {
    let (mut lo, mut hi) = (ell, end - 1);
    while lo < hi {
        let mid = (lo + hi + 1) / 2;
        if le_cover(chord_eval(w, mid, ell as f64), target) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

/// The next cover line for a symmetric sequence at left endpoint `ell`;
/// `true` marks the trailing constant.
fn next_line_scb(wv: &[f64], eps: f64, ell: usize) -> (Line, bool) {
    let r = wv.len() - 1;
    let target = (1.0 + eps) * wv[ell];
    if le_cover(wv[r], target) {
        return (Line::constant(wv[r]), true);
    }
    let j = last_feasible_chord(wv, ell, r, target);
    let q = j + 1;
    let line = if q == r && le_cover(chord_eval(wv, r - 1, ell as f64), target) {
        // The final chord reaches r and is pointwise tighter on the domain
        // than the two-point line; prefer it.
        chord(wv, r - 1)
    } else {
        Line::through(ell as f64, target, q as f64, wv[q])
    };
    (line, false)
}

/// One greedy step of the cover construction for a symmetric penalty
/// sequence: returns a line that `(1+eps)`-covers `w` on a maximal range
/// `ell..=p` while upper-bounding `w` at every integer in `0..=r`.
///
/// If the trailing constant `w(r)` already covers `ell`, it is returned with
/// the sentinel `p = r + 1`.
pub fn find_next(w: &ScbFunction, eps: f64, ell: usize) -> Result<(Line, usize)> {
    let r = w.r();
    if ell < 1 || ell > r {
        return Err(Error::Domain(format!("left endpoint {ell} outside [1, {r}]")));
    }
    let wv = w.values();
    let (line, is_constant) = next_line_scb(wv, eps, ell);
    if is_constant {
        return Ok((line, r + 1));
    }
    let p = extend_coverage(wv, eps, &line, ell, r);
    Ok((line, p))
}

/// Builds a minimum-size `(1+eps)` cover of a symmetric penalty sequence.
///
/// The first line is `w(1)·x`, the last is the constant `w(r)`, and the
/// number of positive-slope lines is minimal over all feasible covers. The
/// zero function yields an empty cover.
///
/// Runs in `O(r)`: one sweep confirms the `(1+eps)` bound at every index
/// under the line currently active, and each new line costs a bisection.
pub fn find_best_cover(w: &ScbFunction, eps: f64) -> Result<PlCover> {
    if !(eps >= 0.0) {
        return Err(Error::Domain(format!("eps must be nonnegative, got {eps}")));
    }
    let r = w.r();
    if w.is_zero() {
        return Ok(PlCover::empty(r));
    }
    let wv = w.values();
    let mut lines = vec![Line::new(wv[1], 0.0)];
    let mut covered = 1usize; // g0 hits w exactly at 0 and 1
    while covered < r {
        let cur = *lines.last().unwrap();
        if le_cover(cur.eval((covered + 1) as f64), (1.0 + eps) * wv[covered + 1]) {
            covered += 1;
            continue;
        }
        if cur.slope == 0.0 {
            // The trailing constant covers every remaining index by
            // monotonicity; a failure here means the input broke down
            // numerically.
            return Err(Error::Cover(format!(
                "constant line failed to cover index {}",
                covered + 1
            )));
        }
        let (g, _is_constant) = next_line_scb(wv, eps, covered + 1);
        lines.push(g);
    }
    if lines.last().unwrap().slope != 0.0 {
        lines.push(Line::constant(wv[r]));
    }
    Ok(PlCover { lines, domain_end: r })
}

/// Tangent-line cover of the clique penalty `zeta(x) = x(k-x)` over the
/// continuous interval `[0, k/2]`.
///
/// Each step picks the tangency point `t` whose line meets `(1+eps)·zeta` at
/// the current frontier `z`, then advances `z` to where that tangent stops
/// covering; both are closed-form roots of quadratics. The piece count is
/// `O(eps^{-1/2} log log(1/eps))`, independent of `k`. `eps = 0` (and
/// effectively-exact `eps < 1e-9`, where the recurrence stalls in floating
/// point) delegates to [`find_best_cover`] on the integer grid.
pub fn clique_cover(k: usize, eps: f64) -> Result<PlCover> {
    if k < 2 {
        return Err(Error::Domain(format!("clique cover needs k >= 2, got {k}")));
    }
    if !(eps >= 0.0) {
        return Err(Error::Domain(format!("eps must be nonnegative, got {eps}")));
    }
    if eps < 1e-9 {
        let w: Vec<f64> = (0..=k / 2).map(|i| (i * (k - i)) as f64).collect();
        return find_best_cover(&ScbFunction::new(w)?, eps);
    }
    let kf = k as f64;
    let half = kf / 2.0;
    let mut lines = vec![Line::new(kf - 1.0, 0.0)];
    let mut z = 1.0_f64;
    while z < half {
        let t = z + (z * (kf - z) * eps).sqrt();
        if t >= half {
            // Tangent at k/2 is the constant k^2/4; it covers [z, k/2]
            // because the tangent at t >= k/2 already met (1+eps)·zeta(z)
            // from above there.
            lines.push(Line::constant(half * half));
            break;
        }
        lines.push(Line::new(kf - 2.0 * t, t * t));
        z = t / (1.0 + eps)
            + kf * eps / (2.0 * (1.0 + eps))
            + (kf * kf * eps * eps + 4.0 * eps * t * (kf - t)).sqrt() / (2.0 * (1.0 + eps));
    }
    if lines.last().unwrap().slope > 0.0 {
        let c = lines.iter().map(|g| g.eval(half)).fold(f64::INFINITY, f64::min);
        lines.push(Line::constant(c));
    }
    Ok(PlCover { lines, domain_end: k / 2 })
}

/// CB-gadget weight vectors: the combined gadget evaluates to
/// `sum_j a_j * min(i, b_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CcbParams {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl CcbParams {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::Domain("a and b must have equal length".into()));
        }
        for (j, v) in a.iter().enumerate() {
            if !(*v > 0.0) {
                return Err(Error::Domain(format!("a[{j}] = {v} must be positive")));
            }
        }
        for j in 0..b.len() {
            if !(b[j] > 0.0) || (j > 0 && b[j] <= b[j - 1]) {
                return Err(Error::Domain("b must be positive and strictly increasing".into()));
            }
        }
        Ok(CcbParams { a, b })
    }

    pub fn empty() -> Self {
        CcbParams { a: Vec::new(), b: Vec::new() }
    }

    /// Number of CB-gadgets.
    pub fn order(&self) -> usize {
        self.a.len()
    }

    pub fn scaled(&self, c: f64) -> CcbParams {
        CcbParams { a: self.a.iter().map(|v| v * c).collect(), b: self.b.clone() }
    }
}

/// Converts a symmetric cover into CB-gadget weights: `b_j` are the envelope
/// breakpoints and `a_j` the slope drops across them.
pub fn cover_to_ccb(c: &PlCover) -> Result<CcbParams> {
    if c.lines.is_empty() {
        return Ok(CcbParams::empty());
    }
    let lines = &c.lines;
    for t in 1..lines.len() {
        if lines[t].slope >= lines[t - 1].slope {
            return Err(Error::Cover("slopes must be strictly decreasing".into()));
        }
    }
    let last = lines.last().unwrap();
    if last.slope != 0.0 {
        return Err(Error::Cover("symmetric cover must end with a constant line".into()));
    }
    if lines.len() == 1 {
        return if last.intercept == 0.0 {
            Ok(CcbParams::empty())
        } else {
            Err(Error::Cover("constant-only cover cannot pass through the origin".into()))
        };
    }
    let scale = last.intercept.abs().max(1.0);
    if lines[0].intercept.abs() > 1e-9 * scale {
        return Err(Error::Cover("first line must pass through the origin".into()));
    }
    let mut a = Vec::with_capacity(lines.len() - 1);
    let mut b = Vec::with_capacity(lines.len() - 1);
    for t in 0..lines.len() - 1 {
        a.push(lines[t].slope - lines[t + 1].slope);
        b.push(lines[t].intersect_x(&lines[t + 1]));
    }
    // Tangent covers of odd-k cliques run to k/2 = r + 1/2, so a suffix of
    // breakpoints may land in (r, k/2]. min(i, b) is unchanged at integers
    // i <= r for any b >= r: clamp them to r and merge the collided gadgets.
    let end = c.domain_end as f64;
    if let Some(first) = b.iter().position(|bj| *bj >= end) {
        let tail: f64 = a[first..].iter().sum();
        a.truncate(first);
        b.truncate(first);
        a.push(tail);
        b.push(end);
    }
    CcbParams::new(a, b)
}

/// `sum_j a_j * min(i, b_j)`.
pub fn ccb_evaluate(p: &CcbParams, i: usize) -> f64 {
    let x = i as f64;
    p.a.iter().zip(p.b.iter()).map(|(a, b)| a * x.min(*b)).sum()
}

/// ACB-gadget weight vectors plus terminal weights; evaluates to
/// `z0(k-i) + zk·i + sum_j a_j * min(i(k-b_j), (k-i)b_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KcgParams {
    pub z0: f64,
    pub zk: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl KcgParams {
    pub fn new(z0: f64, zk: f64, a: Vec<f64>, b: Vec<f64>, k: usize) -> Result<Self> {
        if !(z0 >= 0.0) || !(zk >= 0.0) {
            return Err(Error::Domain("terminal weights must be nonnegative".into()));
        }
        if a.len() != b.len() {
            return Err(Error::Domain("a and b must have equal length".into()));
        }
        for (j, v) in a.iter().enumerate() {
            if !(*v > 0.0) {
                return Err(Error::Domain(format!("a[{j}] = {v} must be positive")));
            }
        }
        for j in 0..b.len() {
            if !(b[j] > 0.0) || (j > 0 && b[j] <= b[j - 1]) {
                return Err(Error::Domain("b must be positive and strictly increasing".into()));
            }
        }
        if let Some(bj) = b.last() {
            if *bj >= k as f64 {
                return Err(Error::Domain(format!("breakpoint {bj} must be below k = {k}")));
            }
        }
        Ok(KcgParams { z0, zk, a, b })
    }

    pub fn empty() -> Self {
        KcgParams { z0: 0.0, zk: 0.0, a: Vec::new(), b: Vec::new() }
    }

    pub fn order(&self) -> usize {
        self.a.len()
    }

    pub fn scaled(&self, c: f64) -> KcgParams {
        KcgParams {
            z0: self.z0 * c,
            zk: self.zk * c,
            a: self.a.iter().map(|v| v * c).collect(),
            b: self.b.clone(),
        }
    }
}

/// Greedy step over a generalized sequence on `0..=k`; slopes may be
/// negative and both endpoints carry real penalties.
fn gscb_find_next(wv: &[f64], eps: f64, ell: usize) -> (Line, usize) {
    let k = wv.len() - 1;
    if ell == k {
        return (chord(wv, k - 1), k);
    }
    let target = (1.0 + eps) * wv[ell];
    let j = last_feasible_chord(wv, ell, k, target);
    let q = j + 1;
    let line = if q == k && le_cover(chord_eval(wv, k - 1, ell as f64), target) {
        chord(wv, k - 1)
    } else {
        Line::through(ell as f64, target, q as f64, wv[q])
    };
    let p = extend_coverage(wv, eps, &line, q, k);
    (line, p)
}

/// Builds a `(1+eps)` cover of a generalized penalty sequence over `0..=k`.
///
/// Same greedy as [`find_best_cover`] but run over the whole asymmetric
/// range, starting from `ell = 0` and terminating once coverage reaches `k`;
/// no trailing constant is appended. The envelope is concave and nonnegative
/// on `[0, k]`, uses at most `k+1` lines at `eps = 0`, and `O(log(k)/eps)`
/// for `eps > 0`.
pub fn gscb_cover(w: &GscbFunction, eps: f64) -> Result<PlCover> {
    if !(eps >= 0.0) {
        return Err(Error::Domain(format!("eps must be nonnegative, got {eps}")));
    }
    let k = w.k();
    let wv = w.values();
    let mut lines = Vec::new();
    let mut ell = 0usize;
    while ell <= k {
        let (g, p) = gscb_find_next(wv, eps, ell);
        lines.push(g);
        ell = p + 1;
    }
    Ok(PlCover { lines, domain_end: k })
}

/// Converts a generalized cover into ACB-gadget weights (Lemma-style
/// reverse construction): breakpoints become `b`, slope drops over `k`
/// become `a`, and the envelope's endpoint values give `z0`, `zk`.
pub fn cover_to_kcg(c: &PlCover, k: usize) -> Result<KcgParams> {
    if c.lines.is_empty() {
        return Ok(KcgParams::empty());
    }
    let lines = &c.lines;
    for t in 1..lines.len() {
        if lines[t].slope >= lines[t - 1].slope {
            return Err(Error::Cover("slopes must be strictly decreasing".into()));
        }
    }
    let kf = k as f64;
    let z0 = c.envelope(0.0) / kf;
    let zk = c.envelope(kf) / kf;
    if z0 < 0.0 || zk < 0.0 {
        return Err(Error::Cover("envelope is negative at an endpoint".into()));
    }
    let mut a = Vec::with_capacity(lines.len() - 1);
    let mut b = Vec::with_capacity(lines.len() - 1);
    for t in 0..lines.len() - 1 {
        a.push((lines[t].slope - lines[t + 1].slope) / kf);
        b.push(lines[t].intersect_x(&lines[t + 1]));
    }
    if let Some(bj) = b.last() {
        if *bj >= kf {
            return Err(Error::Cover(format!("breakpoint {bj} not below k = {k}")));
        }
    }
    KcgParams::new(z0.max(0.0), zk.max(0.0), a, b, k)
}

/// `z0(k-i) + zk·i + sum_j a_j * min(i(k-b_j), (k-i)b_j)`.
pub fn kcg_evaluate(p: &KcgParams, i: usize, k: usize) -> f64 {
    let x = i as f64;
    let kf = k as f64;
    let mut v = p.z0 * (kf - x) + p.zk * x;
    for (a, b) in p.a.iter().zip(p.b.iter()) {
        v += a * (x * (kf - b)).min((kf - x) * b);
    }
    v
}
