//! Connected pieces of the configuration space, their closed forms and the
//! states where some fold tangent is infinite.
//!
//! Three families of parametrization are used:
//!
//! * rational branches, driven by one crease's fold angle `s = ρ ∈ [−π, π]`;
//! * periodic branches `x = p_x F(t)`, `y = sgn(π−σ) p_y F(t − θ₁)`,
//!   `z = p_z F(t + K)`, `w = sgn(π−σ) p_w F(t − θ₂)` with `F` one of `cn`,
//!   `sn` or `cos`, evaluated on vertical lines `t = j·K + i·s′`;
//! * branches carried over from a conic I or deltoid II vertex by strip switches.
//!
//! A periodic branch lives on two parameter lines. The unified parameter
//! `s` walks the first line for `s ≥ 0` and the second for `s < 0`, both at
//! distance `|s|` from the real axis.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analysis::{strip_switch, Crease};
use crate::angles::{half_angle, FoldTangents, ProjectiveReal, SectorAngles, SignedSqrt};
use crate::classify::{amplitudes, classify, modulus_m_minus_one, modulus_m_unchecked, Amplitudes, VertexType};
use crate::elliptic::{sc_inverse_with, shifted_cos, shifted_ratios, EllipticContext, Ratio, POLE_EXCLUSION};
use crate::embed::{post_examine, CLOSURE_TOL};
use crate::error::{Error, Result};
use crate::relations::candidate_tuples;

/// Unbounded branches are sampled until `|x|` passes this value.
pub const TRUNCATION: f64 = 1e6;
/// Scale of the tanh-spaced sampling grid.
pub const GRID_SCALE: f64 = 3.0;
pub const DEFAULT_SAMPLES: usize = 257;
/// Relative imaginary part tolerated when reading a real state off a complex closed form.
pub const RESIDUE_TOL: f64 = 1e-10;
/// Distance from a degenerate type below which periodic branches are refused.
pub const DEGENERACY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BranchKind {
    RationalClosedForm,
    TrigExponential,
    EllipticCN,
    EllipticSN,
}

/// A phase `θ = quarter_multiple·K + i·orientation·imag_part`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseShift {
    pub quarter_multiple: i32,
    pub imag_part: f64,
}

/// Parameter interval. Unbounded domains accept any finite `s`; `lo` and
/// `hi` then hold the sampling truncation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SDomain {
    pub lo: f64,
    pub hi: f64,
    pub bounded: bool,
}

impl SDomain {
    pub fn contains(&self, s: f64) -> bool {
        let slack = 1e-12 * (1.0 + self.hi.abs());
        s.is_finite() && (!self.bounded || (s >= self.lo - slack && s <= self.hi + slack))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfinitySolution {
    /// For a branch at infinity, its state at driver fold angle `π/2`.
    pub state: FoldTangents,
    pub isolated: bool,
    /// The branch this solution sweeps, when it is not isolated.
    pub branch_id: Option<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Branch {
    pub vertex_type: VertexType,
    pub kind: BranchKind,
    pub branch_id: u32,
    /// Amplitudes of the periodic closed form; `None` for rational branches.
    pub amplitudes: Option<Amplitudes>,
    pub phase1: Option<PhaseShift>,
    pub phase2: Option<PhaseShift>,
    /// Quarter multiples of the lines walked for `s ≥ 0` and `s < 0`.
    pub offset: [i32; 2],
    /// `±1`: the imaginary part of `t` is `direction·|s|`.
    pub direction: i8,
    /// `±1`: sign of the imaginary parts of the phase shifts.
    pub orientation: i8,
    pub s_domain: SDomain,
    pub sign_sigma: i8,
    pub closure_at_infinity: bool,
    /// For rational branches, the crease whose fold angle is `s`.
    pub driver: Option<Crease>,
    /// Strip switches applied, in order, to the source branch.
    pub strip_switches: Vec<u8>,
    #[serde(skip)]
    form: Form,
}

#[derive(Debug, Clone)]
enum Form {
    Rational([Homogeneous; 4]),
    Periodic(Periodic),
    Switched { source_angles: SectorAngles, source: Box<Branch> },
}

/// A ratio of two forms of equal degree in `(d1, d2) = (sin ρ/2, cos ρ/2)`,
/// coefficients by descending power of `d1`.
#[derive(Debug, Clone)]
struct Homogeneous {
    num: Vec<f64>,
    den: Vec<f64>,
}

impl Homogeneous {
    fn new(num: &[f64], den: &[f64]) -> Self {
        Self { num: num.to_vec(), den: den.to_vec() }
    }

    /// `(a·d + b) / (c·d + e)` in the driver tangent `d`.
    fn mobius(a: f64, b: f64, c: f64, e: f64) -> Self {
        Self::new(&[a, b], &[c, e])
    }

    fn driver() -> Self {
        Self::mobius(1.0, 0.0, 0.0, 1.0)
    }

    fn scaled(k: f64) -> Self {
        Self::mobius(k, 0.0, 0.0, 1.0)
    }

    fn zero() -> Self {
        Self::new(&[0.0], &[1.0])
    }

    fn infinity() -> Self {
        Self::new(&[1.0], &[0.0])
    }

    fn eval(&self, d1: f64, d2: f64) -> ProjectiveReal {
        let poly = |c: &[f64]| {
            let n = c.len() - 1;
            c.iter().enumerate().map(|(i, v)| v * d1.powi((n - i) as i32) * d2.powi(i as i32)).sum::<f64>()
        };
        ProjectiveReal::ratio(poly(&self.num), poly(&self.den))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Wave {
    Cn,
    Sn,
    Cos,
    /// Deltoid II: `cos` for `x` and `z`, `e^{it}` for `y` and `w`.
    CosExp,
}

#[derive(Debug, Clone)]
struct Periodic {
    wave: Wave,
    ctx: Option<EllipticContext>,
    /// Amplitudes with the `sgn(π−σ)` factors already applied.
    amps: [Complex64; 4],
    q: [i32; 2],
    theta: f64,
    orientation: f64,
    direction: f64,
}

impl Periodic {
    /// Line offset and imaginary offset of each coordinate's argument.
    fn shifts(&self) -> [(i32, f64); 4] {
        let th = self.orientation * self.theta;
        [(0, 0.0), (-self.q[0], -th), (1, 0.0), (-self.q[1], -th)]
    }

    fn ratios(&self, line: i32, s_prime: f64) -> [Ratio; 4] {
        let u = self.direction * s_prime;
        let shifts = self.shifts();
        let mut out = [Ratio { factor: Complex64::new(0.0, 0.0), num: 0.0, den: 1.0 }; 4];
        for (i, (dj, di)) in shifts.into_iter().enumerate() {
            let (j, im) = (line + dj, u + di);
            out[i] = match self.wave {
                Wave::Cn => shifted_ratios(j, im, self.ctx.as_ref().expect("elliptic context")).cn,
                Wave::Sn => shifted_ratios(j, im, self.ctx.as_ref().expect("elliptic context")).sn,
                Wave::Cos => shifted_cos(j, im),
                Wave::CosExp if i % 2 == 0 => shifted_cos(j, im),
                Wave::CosExp => {
                    let quarter_turn = Complex64::new(0.0, 1.0).powi(line.rem_euclid(4));
                    Ratio { factor: quarter_turn, num: (-u).exp(), den: 1.0 }
                }
            };
        }
        out
    }

    fn state(&self, line: i32, s_prime: f64) -> Result<FoldTangents> {
        let ratios = self.ratios(line, s_prime);
        let mut coords = [ProjectiveReal::ZERO; 4];
        for (i, r) in ratios.iter().enumerate() {
            coords[i] = to_real(self.amps[i] * r.factor, r.num, r.den, ['x', 'y', 'z', 'w'][i])?;
        }
        Ok(FoldTangents::from_array(coords))
    }

    /// Parameters `s′ ∈ [0, K′]` on a line where some coordinate has a pole.
    fn poles(&self, line: i32, big_k_prime: f64) -> Vec<f64> {
        if !matches!(self.wave, Wave::Cn | Wave::Sn) {
            return Vec::new();
        }
        let mut out = Vec::new();
        for (dj, di) in self.shifts() {
            if (line + dj).rem_euclid(2) != 0 {
                continue;
            }
            // imaginary part direction·s′ + di ≡ K′ (mod 2K′)
            for m in -3..=3 {
                let sp = ((2 * m + 1) as f64 * big_k_prime - di) / self.direction;
                if (0.0..=big_k_prime).contains(&sp) {
                    out.push(sp);
                }
            }
        }
        out
    }
}

/// Reads `factor·num/den` as a real projective value, rejecting a genuine imaginary part.
fn to_real(factor: Complex64, num: f64, den: f64, coordinate: char) -> Result<ProjectiveReal> {
    if den.abs() < POLE_EXCLUSION * num.abs() {
        let residue = factor.im.abs() / (factor.norm() + f64::MIN_POSITIVE);
        if residue > RESIDUE_TOL && factor.re.abs() > 0.0 {
            return Err(Error::ImaginaryResidue { coordinate, residue });
        }
        return Ok(ProjectiveReal::Infinity);
    }
    let v = factor * (num / den);
    if v.im.abs() > RESIDUE_TOL * (1.0 + v.re.abs()) {
        return Err(Error::ImaginaryResidue { coordinate, residue: v.im.abs() });
    }
    Ok(ProjectiveReal::Finite(v.re))
}

impl Branch {
    fn rational(vertex_type: VertexType, id: u32, driver: Crease, coords: [Homogeneous; 4], at_inf: bool) -> Self {
        Branch {
            vertex_type,
            kind: BranchKind::RationalClosedForm,
            branch_id: id,
            amplitudes: None,
            phase1: None,
            phase2: None,
            offset: [0, 0],
            direction: 1,
            orientation: 1,
            s_domain: SDomain { lo: -PI, hi: PI, bounded: true },
            sign_sigma: 1,
            closure_at_infinity: at_inf,
            driver: Some(driver),
            strip_switches: Vec::new(),
            form: Form::Rational(coords),
        }
    }

    /// The state at parameter `s`.
    pub fn state(&self, s: f64) -> Result<FoldTangents> {
        if !self.s_domain.contains(s) {
            return Err(Error::OutOfDomain { s, lo: self.s_domain.lo, hi: self.s_domain.hi });
        }
        match &self.form {
            Form::Rational(coords) => {
                let (d1, d2) = half_angle(s.clamp(-PI, PI));
                let c = [0, 1, 2, 3].map(|i| coords[i].eval(d1, d2));
                Ok(FoldTangents::from_array(c))
            }
            Form::Periodic(p) => {
                if s >= 0.0 {
                    p.state(self.offset[0], s)
                } else {
                    p.state(self.offset[1], -s)
                }
            }
            Form::Switched { source_angles, source } => {
                let mut angles = *source_angles;
                let mut fold = source.state(s)?;
                for &v in &self.strip_switches {
                    (angles, fold) = strip_switch(v, &angles, &fold)?;
                }
                Ok(fold)
            }
        }
    }

    /// Parameter values where some coordinate is exactly infinite.
    pub fn pole_parameters(&self) -> Vec<f64> {
        match &self.form {
            Form::Rational(_) => Vec::new(),
            Form::Switched { source, .. } => source.pole_parameters(),
            Form::Periodic(p) => {
                let kp = self.s_domain.hi;
                let mut out: Vec<f64> = p.poles(self.offset[0], kp);
                out.extend(p.poles(self.offset[1], kp).into_iter().filter(|&s| s > 0.0).map(|s| -s));
                out.sort_by(f64::total_cmp);
                out.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
                out
            }
        }
    }

    /// `n` ascending parameter values covering the domain.
    ///
    /// Rational branches use a uniform grid in the driving fold angle.
    /// Periodic ones use `s = S·atanh(u·tanh c)/c` for uniform `u ∈ [−1, 1]`,
    /// denser near `s = 0`, with the nearest grid point moved onto each pole.
    pub fn sample_parameters(&self, n: usize) -> Vec<f64> {
        let n = n.max(2);
        let (lo, hi) = (self.s_domain.lo, self.s_domain.hi);
        let u = |i: usize| -1.0 + 2.0 * i as f64 / (n - 1) as f64;
        if self.kind == BranchKind::RationalClosedForm {
            let mut g: Vec<f64> = (0..n).map(|i| 0.5 * (lo + hi) + 0.5 * (hi - lo) * u(i)).collect();
            g[0] = lo;
            g[n - 1] = hi;
            return g;
        }
        let c = GRID_SCALE;
        let mut g: Vec<f64> = (0..n).map(|i| hi * (u(i) * c.tanh()).atanh() / c).collect();
        g[0] = lo;
        g[n - 1] = hi;
        if n % 2 == 1 {
            g[n / 2] = 0.0;
        }
        // endpoints and the midpoint stay put
        let mut taken = vec![false; n];
        taken[0] = true;
        taken[n - 1] = true;
        if n % 2 == 1 {
            taken[n / 2] = true;
        }
        for p in self.pole_parameters() {
            if g.contains(&p) {
                continue;
            }
            // close poles can share a nearest grid point, so fall back to the nearest free one
            let free = (0..n).filter(|&i| !taken[i]).min_by(|&a, &b| (g[a] - p).abs().total_cmp(&(g[b] - p).abs()));
            if let Some(i) = free {
                g[i] = p;
                taken[i] = true;
            }
        }
        g.sort_by(f64::total_cmp);
        g
    }
}

/// Same as [`Branch::state`].
pub fn branch_state(branch: &Branch, s: f64) -> Result<FoldTangents> {
    branch.state(s)
}

/// States at [`Branch::sample_parameters`].
pub fn sample_branch(branch: &Branch, n: usize) -> Result<Vec<FoldTangents>> {
    branch.sample_parameters(n).into_iter().map(|s| branch.state(s)).collect()
}

fn sign_of(v: f64) -> i8 {
    if v >= 0.0 {
        1
    } else {
        -1
    }
}

/// Row of the phase table and parameter lines, chosen by which amplitudes are real.
struct PhaseRow {
    q: [i32; 2],
    /// Whether the `(α, γ)` ratio (rather than `(β, δ)`) fixes the phase.
    alpha_gamma: bool,
    orientation: f64,
}

fn phase_row(amps: &Amplitudes) -> PhaseRow {
    let r = amps.to_array().map(|p| p.is_real());
    let (mut q, alpha_gamma) = if r[0] && r[1] {
        ([0, 1], true)
    } else if r[1] && r[2] {
        ([-1, 0], false)
    } else if r[2] && r[3] {
        ([0, -1], true)
    } else {
        ([1, 0], false)
    };
    let orientation = if r[0] {
        1.0
    } else {
        // imaginary p_x: the lines move by a quarter period and one phase by a half
        if r[1] {
            q[1] += 2;
        } else {
            q[0] += 2;
        }
        -1.0
    };
    PhaseRow { q, alpha_gamma, orientation }
}

fn check_amplitudes(amps: &Amplitudes) -> Result<()> {
    for (p, name) in amps.to_array().iter().zip(["p_x", "p_y", "p_z", "p_w"]) {
        if p.magnitude() < DEGENERACY_TOL {
            return Err(Error::NearDegenerate(format!("amplitude {name} = {:e}", p.magnitude())));
        }
    }
    Ok(())
}

/// `k² = 1 − 1/M` above one and `1 − M` below, both read off `M − 1`.
fn elliptic_context(angles: &SectorAngles) -> EllipticContext {
    let m = modulus_m_unchecked(angles);
    let m1 = modulus_m_minus_one(angles);
    if m1 > 0.0 {
        EllipticContext::from_pair((m1 / m).sqrt(), m.sqrt().recip())
    } else {
        EllipticContext::from_pair((-m1).sqrt(), m.sqrt())
    }
}

/// Imaginary part of both phases of an elliptic vertex.
///
/// `dc(θ′; k′)` equals `√(sin(σ−α) sin(σ−γ) / (sin α sin γ))` (or the same in
/// `β, δ`) when `M > 1`, and its reciprocal when `M < 1`. Near `M = 1` that
/// ratio sits next to 1 where `dc` is flat, so `θ′` is read off
/// `sc² = (dc² − 1)/k²` with `dc² − 1` in product form.
fn elliptic_theta(angles: &SectorAngles, m: f64, ctx: &EllipticContext, alpha_gamma: bool) -> Result<f64> {
    let [a, b, g, d] = angles.to_array();
    let s = angles.semi_perimeter();
    let (u, v, sign) = if alpha_gamma { (a, g, -1.0) } else { (b, d, 1.0) };
    // sin(σ−u) sin(σ−v) − sin u sin v = ∓ sin σ sin((α−β+γ−δ)/2)
    let r = crate::classify::degeneracy_relations(angles)[0];
    let excess = sign * s.sin() * (0.5 * r).sin() / (u.sin() * v.sin());
    let dc2_minus_one = if m < 1.0 { -excess / (1.0 + excess) } else { excess };
    if dc2_minus_one < -1e-12 {
        return Err(Error::DomainError(1.0 + dc2_minus_one));
    }
    sc_inverse_with(dc2_minus_one.max(0.0).sqrt() / ctx.k, ctx.k_prime, ctx.k)
}

/// `θ′` with `tanh θ′ = √(sin β sin δ / (sin α sin γ))`, folded onto the real line.
fn conic_theta(angles: &SectorAngles) -> Result<f64> {
    let [a, b, g, d] = angles.to_array();
    let r = (b.sin() * d.sin() / (a.sin() * g.sin())).sqrt();
    if (1.0 - r).abs() < DEGENERACY_TOL {
        return Err(Error::NearDegenerate(format!("conic phase ratio {r} is 1")));
    }
    Ok(0.5 * ((1.0 + r) / (1.0 - r)).abs().ln())
}

/// `(θ₁, θ₂)` for conic and elliptic vertices.
///
/// For conic II–IV the phases belong to the conic I vertex their branches are
/// switched from.
pub fn phase_shifts(angles: &SectorAngles) -> Result<(PhaseShift, PhaseShift)> {
    let vt = classify(angles).vertex_type;
    let source = match vt {
        VertexType::Elliptic | VertexType::ConicI => *angles,
        VertexType::ConicII | VertexType::ConicIII | VertexType::ConicIV => switch_angles(angles, conic_switches(vt)),
        other => return Err(Error::TypeMismatch(other)),
    };
    let amps = amplitudes(&source);
    let row = phase_row(&amps);
    let theta = if vt == VertexType::Elliptic {
        let m = modulus_m_unchecked(angles);
        elliptic_theta(angles, m, &elliptic_context(angles), row.alpha_gamma)?
    } else {
        conic_theta(&source)?
    };
    Ok((
        PhaseShift { quarter_multiple: row.q[0], imag_part: theta },
        PhaseShift { quarter_multiple: row.q[1], imag_part: theta },
    ))
}

fn periodic_pair(
    vertex_type: VertexType,
    kind: BranchKind,
    periodic: Periodic,
    amplitudes: Amplitudes,
    lines: [i32; 2],
    domain: SDomain,
    sign_sigma: i8,
) -> Vec<Branch> {
    [1.0, -1.0]
        .into_iter()
        .enumerate()
        .map(|(i, eps)| {
            let p = Periodic { direction: periodic.orientation * eps, ..periodic.clone() };
            Branch {
                vertex_type,
                kind,
                branch_id: i as u32 + 1,
                amplitudes: Some(amplitudes),
                phase1: Some(PhaseShift { quarter_multiple: p.q[0], imag_part: p.theta }),
                phase2: Some(PhaseShift { quarter_multiple: p.q[1], imag_part: p.theta }),
                offset: lines,
                direction: p.direction as i8,
                orientation: p.orientation as i8,
                s_domain: domain,
                sign_sigma,
                closure_at_infinity: false,
                driver: None,
                strip_switches: Vec::new(),
                form: Form::Periodic(p),
            }
        })
        .collect()
}

fn signed_amps(amps: &Amplitudes, sg: f64) -> [Complex64; 4] {
    let a = amps.to_array().map(|p| p.value());
    [a[0], a[1] * sg, a[2], a[3] * sg]
}

fn truncation_for(px: f64) -> f64 {
    (TRUNCATION * (1.0 + 1e-9) / px).asinh()
}

fn elliptic_branches(angles: &SectorAngles) -> Result<Vec<Branch>> {
    let m = modulus_m_unchecked(angles);
    let m1 = modulus_m_minus_one(angles);
    if m1.abs() < DEGENERACY_TOL {
        return Err(Error::NearDegenerate(format!("M − 1 = {m1:e}")));
    }
    let amps = amplitudes(angles);
    check_amplitudes(&amps)?;
    let ctx = elliptic_context(angles);
    let row = phase_row(&amps);
    let theta = elliptic_theta(angles, m, &ctx, row.alpha_gamma)?;
    let cn = m1 > 0.0;
    let lines = match (amps.px.is_real(), cn) {
        (true, true) => [0, 2],
        (true, false) => [1, 3],
        (false, true) => [3, 1],
        (false, false) => [2, 0],
    };
    let sg = sign_of(PI - angles.semi_perimeter());
    let periodic = Periodic {
        wave: if cn { Wave::Cn } else { Wave::Sn },
        ctx: Some(ctx),
        amps: signed_amps(&amps, sg as f64),
        q: row.q,
        theta,
        orientation: row.orientation,
        direction: 1.0,
    };
    let kind = if cn { BranchKind::EllipticCN } else { BranchKind::EllipticSN };
    let domain = SDomain { lo: -ctx.big_k_prime, hi: ctx.big_k_prime, bounded: true };
    Ok(periodic_pair(VertexType::Elliptic, kind, periodic, amps, lines, domain, sg))
}

fn conic_branches(angles: &SectorAngles) -> Result<Vec<Branch>> {
    let amps = amplitudes(angles);
    check_amplitudes(&amps)?;
    let row = phase_row(&amps);
    let theta = conic_theta(angles)?;
    let lines = if amps.px.is_real() { [0, 2] } else { [3, 1] };
    let sg = sign_of(PI - angles.semi_perimeter());
    let periodic = Periodic {
        wave: Wave::Cos,
        ctx: None,
        amps: signed_amps(&amps, sg as f64),
        q: row.q,
        theta,
        orientation: row.orientation,
        direction: 1.0,
    };
    let hi = truncation_for(amps.px.magnitude());
    let domain = SDomain { lo: -hi, hi, bounded: false };
    Ok(periodic_pair(VertexType::ConicI, BranchKind::TrigExponential, periodic, amps, lines, domain, sg))
}

/// Deltoid II, `α = β`, `γ = δ`: `x = ±p_x cos t`, `y = w = sgn(π−σ) c e^{it}`,
/// `z = p_z cos(t + π/2)` with `c² = sin(β+γ)/sin(β−γ)`.
fn deltoid2_branches(angles: &SectorAngles) -> Result<Vec<Branch>> {
    let b = 0.5 * (angles.alpha() + angles.beta());
    let g = 0.5 * (angles.gamma() + angles.delta());
    let (sb, sgm) = (b.sin(), g.sin());
    let px = SignedSqrt::of(sb * sb / (sgm * sgm) - 1.0);
    let pz = SignedSqrt::of(sgm * sgm / (sb * sb) - 1.0);
    let c = SignedSqrt::of((b + g).sin() / (b - g).sin());
    let amps = Amplitudes { px, py: c, pz, pw: c };
    check_amplitudes(&amps)?;
    let sg = sign_of(PI - (b + g));
    let lines = if px.is_real() { [0, 2] } else { [3, 1] };
    // with imaginary p_x the real x comes from −p_x cos t
    let x_amp = if px.is_real() { px.value() } else { -px.value() };
    let cs = c.value() * sg as f64;
    let periodic = Periodic {
        wave: Wave::CosExp,
        ctx: None,
        amps: [x_amp, cs, pz.value(), cs],
        q: [0, 0],
        theta: 0.0,
        orientation: 1.0,
        direction: 1.0,
    };
    let hi = truncation_for(px.magnitude());
    let domain = SDomain { lo: -hi, hi, bounded: false };
    let mut out = periodic_pair(VertexType::DeltoidII, BranchKind::TrigExponential, periodic, amps, lines, domain, sg);
    for br in &mut out {
        br.phase1 = None;
        br.phase2 = None;
    }
    Ok(out)
}

fn switch_angles(angles: &SectorAngles, variants: &[u8]) -> SectorAngles {
    let zero = FoldTangents::finite(0.0, 0.0, 0.0, 0.0);
    variants.iter().fold(*angles, |a, &v| strip_switch(v, &a, &zero).expect("variant in range").0)
}

fn conic_switches(vt: VertexType) -> &'static [u8] {
    match vt {
        VertexType::ConicII => &[1],
        VertexType::ConicIII => &[2],
        VertexType::ConicIV => &[1, 2],
        _ => &[],
    }
}

/// Branches of `angles` obtained by switching those of `source_angles`.
///
/// Switches that flip the sign of `xz` exchange the branch ids, so that
/// branch 1 keeps `xz > 0`.
fn switched(angles: &SectorAngles, vt: VertexType, variants: &[u8], build: fn(&SectorAngles) -> Result<Vec<Branch>>) -> Result<Vec<Branch>> {
    let source_angles = switch_angles(angles, variants);
    let flips_xz = variants.iter().filter(|&&v| v == 1 || v == 3).count() % 2 == 1;
    let mut out: Vec<Branch> = build(&source_angles)?
        .into_iter()
        .map(|src| {
            let id = if flips_xz { 3 - src.branch_id } else { src.branch_id };
            Branch {
                vertex_type: vt,
                branch_id: id,
                strip_switches: variants.to_vec(),
                form: Form::Switched { source_angles, source: Box::new(src.clone()) },
                ..src
            }
        })
        .collect();
    out.sort_by_key(|b| b.branch_id);
    Ok(out)
}

fn rational_branches(angles: &SectorAngles, vt: VertexType) -> Vec<Branch> {
    use Homogeneous as H;
    let [a, b, _, _] = angles.to_array();
    let ca = a.cos();
    let (x, y) = (Crease::X, Crease::Y);
    let simple_y0 = || [H::driver(), H::zero(), H::driver(), H::zero()];
    let simple_x0 = || [H::zero(), H::driver(), H::zero(), H::driver()];
    let inf_yw = || [H::driver(), H::infinity(), H::scaled(-1.0), H::infinity()];
    let inf_xz = || [H::infinity(), H::driver(), H::infinity(), H::scaled(-1.0)];
    let mut finite: Vec<(Crease, [H; 4])> = Vec::new();
    let mut at_inf: Vec<(Crease, [H; 4])> = Vec::new();
    match vt {
        VertexType::Square => {
            finite = vec![(x, simple_y0()), (y, simple_x0())];
            at_inf = vec![(x, inf_yw()), (y, inf_xz())];
        }
        VertexType::Rhombus => {
            let r = H::mobius(0.0, ca, 1.0, 0.0);
            finite = vec![(x, [H::driver(), r.clone(), H::driver(), r])];
            at_inf = vec![(x, inf_yw()), (y, inf_xz())];
        }
        VertexType::Cross => {
            let butterfly = [
                H::driver(),
                H::mobius(0.0, -1.0, ca, 0.0),
                H::scaled(-1.0),
                H::mobius(0.0, 1.0, ca, 0.0),
            ];
            finite = vec![(x, simple_y0()), (y, simple_x0()), (x, butterfly)];
        }
        VertexType::MiuraI => {
            finite = vec![(y, simple_x0()), (x, [H::driver(), H::scaled(ca), H::driver(), H::scaled(-ca)])];
            at_inf = vec![(x, inf_yw())];
        }
        VertexType::MiuraII => {
            let k = -1.0 / ca;
            finite = vec![(x, simple_y0()), (x, [H::driver(), H::scaled(k), H::scaled(-1.0), H::scaled(k)])];
            at_inf = vec![(y, inf_xz())];
        }
        VertexType::Isogram => {
            let (cp, cm) = ((0.5 * (a + b)).cos(), (0.5 * (a - b)).cos());
            let (sp, sm) = ((0.5 * (a + b)).sin(), (0.5 * (a - b)).sin());
            let wiper = H::mobius(0.0, cp, cm, 0.0);
            finite = vec![
                (x, [H::driver(), wiper.clone(), H::driver(), wiper]),
                (x, [H::driver(), H::mobius(0.0, sp, sm, 0.0), H::scaled(-1.0), H::mobius(0.0, sp, -sm, 0.0)]),
            ];
        }
        VertexType::AntiIsogram => {
            let (cp, cm) = ((0.5 * (a + b)).cos(), (0.5 * (a - b)).cos());
            let (sp, sm) = ((0.5 * (a + b)).sin(), (0.5 * (a - b)).sin());
            finite = vec![
                (x, [H::driver(), H::scaled(-sm / sp), H::driver(), H::scaled(sm / sp)]),
                (x, [H::driver(), H::scaled(-cm / cp), H::scaled(-1.0), H::scaled(-cm / cp)]),
            ];
        }
        VertexType::DeltoidI => {
            let y = H::new(&[(b - a).sin(), 0.0, (b + a).sin()], &[0.0, 2.0 * a.sin(), 0.0]);
            let w = H::new(&[(a - b).sin(), 0.0, (a + b).sin()], &[0.0, 2.0 * b.sin(), 0.0]);
            finite = vec![(x, [H::driver(), y, H::driver(), w])];
            at_inf = vec![(x, inf_yw())];
        }
        VertexType::AntiDeltoidI => {
            let y = H::new(&[0.0, -2.0 * a.sin(), 0.0], &[(b - a).sin(), 0.0, (b + a).sin()]);
            let w = H::new(&[0.0, -2.0 * b.sin(), 0.0], &[(a - b).sin(), 0.0, (a + b).sin()]);
            finite = vec![(x, simple_y0()), (x, [H::driver(), y, H::scaled(-1.0), w])];
        }
        VertexType::DeltoidII => {
            at_inf = vec![(y, inf_xz())];
        }
        _ => {}
    }
    let n = finite.len() as u32;
    finite
        .into_iter()
        .map(|(d, c)| (d, c, false))
        .chain(at_inf.into_iter().map(|(d, c)| (d, c, true)))
        .enumerate()
        .map(|(i, (d, c, inf))| Branch::rational(vt, i as u32 + 1, d, c, inf))
        .inspect(|b| debug_assert!(b.branch_id <= n || b.closure_at_infinity))
        .collect()
}

/// Every branch of the configuration space: finite branches first, then
/// branches lying entirely at infinity.
pub fn enumerate_branches(angles: &SectorAngles) -> Result<Vec<Branch>> {
    let vt = classify(angles).vertex_type;
    match vt {
        VertexType::Elliptic => elliptic_branches(angles),
        VertexType::ConicI => conic_branches(angles),
        VertexType::ConicII | VertexType::ConicIII | VertexType::ConicIV => {
            switched(angles, vt, conic_switches(vt), conic_branches)
        }
        VertexType::DeltoidII => {
            let mut out = deltoid2_branches(angles)?;
            out.extend(rational_branches(angles, vt).into_iter().map(|b| Branch { branch_id: 3, ..b }));
            Ok(out)
        }
        VertexType::AntiDeltoidII => switched(angles, vt, &[2], deltoid2_branches),
        _ => Ok(rational_branches(angles, vt)),
    }
}

/// Isolated states with an infinite coordinate: each crease in turn is put at
/// infinity, the remaining relations are solved and the candidates are
/// post-examined.
fn isolated_infinities(angles: &SectorAngles) -> Vec<FoldTangents> {
    let mut out: Vec<FoldTangents> = Vec::new();
    let mut rot = *angles;
    for r in 0..4 {
        let c = candidate_tuples(&rot, ProjectiveReal::Infinity);
        if !c.indeterminate.iter().any(|&b| b) {
            for t in post_examine(&rot, &c.tuples, CLOSURE_TOL) {
                let t = (0..r).fold(t, |t, _| t.unrotated());
                if !out.iter().any(|o| o.max_difference(&t) < 1e-9) {
                    out.push(t);
                }
            }
        }
        rot = rot.rotated();
    }
    out
}

/// States with at least one infinite fold tangent.
///
/// Vertices with a branch at infinity report that branch; the others report
/// the isolated limit points of their finite branches.
pub fn solutions_at_infinity(angles: &SectorAngles) -> Vec<InfinitySolution> {
    let vt = classify(angles).vertex_type;
    let mut branches = rational_branches(angles, vt);
    if vt == VertexType::DeltoidII {
        for b in &mut branches {
            b.branch_id = 3;
        }
    }
    let at_inf: Vec<InfinitySolution> = branches
        .iter()
        .filter(|b| b.closure_at_infinity)
        .map(|b| InfinitySolution {
            state: b.state(PI / 2.0).expect("rational branches are total"),
            isolated: false,
            branch_id: Some(b.branch_id),
        })
        .collect();
    if !at_inf.is_empty() {
        return at_inf;
    }
    isolated_infinities(angles)
        .into_iter()
        .map(|state| InfinitySolution { state, isolated: true, branch_id: None })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::closure_residual;
    use crate::relations::relation_residuals;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

    fn ang(a: f64, b: f64, g: f64, d: f64) -> SectorAngles {
        SectorAngles::new(a, b, g, d).unwrap()
    }

    fn assert_certified(angles: &SectorAngles, branches: &[Branch], n: usize) {
        for br in branches {
            for (s, st) in br.sample_parameters(n).into_iter().zip(sample_branch(br, n).unwrap()) {
                let r = closure_residual(angles, &st);
                assert!(r < 1e-8, "{:?} branch {} s={s}: closure {r:e} at {st:?}", br.vertex_type, br.branch_id);
                for rel in relation_residuals(angles, &st) {
                    assert!(rel < 1e-9, "{:?} branch {} s={s}: relation {rel:e}", br.vertex_type, br.branch_id);
                }
            }
        }
    }

    #[test]
    fn square_branches() {
        let sq = ang(FRAC_PI_2, FRAC_PI_2, FRAC_PI_2, FRAC_PI_2);
        let b = enumerate_branches(&sq).unwrap();
        assert_eq!(b.len(), 4);
        assert_eq!(b.iter().filter(|b| b.closure_at_infinity).count(), 2);
        for st in sample_branch(&b[0], 5).unwrap() {
            assert_eq!(st.y, ProjectiveReal::ZERO);
            assert_eq!(st.w, ProjectiveReal::ZERO);
            assert_eq!(st.z, st.x);
        }
        assert_certified(&sq, &b, 33);
    }

    #[test]
    fn rhombus_at_unit_x() {
        let a = ang(FRAC_PI_3, FRAC_PI_3, FRAC_PI_3, FRAC_PI_3);
        let b = &enumerate_branches(&a).unwrap()[0];
        let st = b.state(FRAC_PI_2).unwrap();
        assert!(st.max_difference(&FoldTangents::finite(1.0, 0.5, 1.0, 0.5)) < 1e-15);
    }

    #[test]
    fn two_samples_hit_endpoints() {
        let a = ang(FRAC_PI_3, FRAC_PI_2, 2.0 * PI / 5.0, FRAC_PI_4);
        for br in enumerate_branches(&a).unwrap() {
            let s = br.sample_parameters(2);
            assert_eq!(s, vec![br.s_domain.lo, br.s_domain.hi]);
        }
    }

    #[test]
    fn elliptic_fixture_certified() {
        let a = ang(FRAC_PI_3, FRAC_PI_2, 2.0 * PI / 5.0, FRAC_PI_4);
        let b = enumerate_branches(&a).unwrap();
        assert_eq!(b.len(), 2);
        assert_certified(&a, &b, 257);
        for br in &b {
            for st in sample_branch(br, 101).unwrap() {
                if let (Some(x), Some(z)) = (st.x.finite(), st.z.finite()) {
                    if x * z != 0.0 && br.amplitudes.unwrap().px.is_real() {
                        assert_eq!((x * z > 0.0), br.branch_id == 1);
                    }
                }
            }
        }
    }

    #[test]
    fn close_poles_all_land_on_the_grid() {
        // x and y poles sit 0.23 apart near the Grashof boundary
        let a = ang(1.1963016440190741, 0.3156596793339543, 2.1307951965815164, 3.0111467542505546);
        for br in enumerate_branches(&a).unwrap() {
            let g = br.sample_parameters(257);
            assert!(g.windows(2).all(|w| w[0] < w[1]));
            for p in br.pole_parameters() {
                assert!(g.contains(&p), "branch {} misses pole {}", br.branch_id, p);
            }
        }
    }

    #[test]
    fn conjugate_keeps_elliptic_modulus_and_swaps_wave() {
        let a = ang(FRAC_PI_3, FRAC_PI_2, 2.0 * PI / 5.0, FRAC_PI_4);
        let c = crate::analysis::conjugate(&a);
        assert!((elliptic_context(&a).k - elliptic_context(&c).k).abs() < 1e-12);
        let kinds = |v: &SectorAngles| enumerate_branches(v).unwrap()[0].kind;
        assert_ne!(kinds(&a), kinds(&c));
    }

    #[test]
    fn barely_elliptic_vertex_still_closes() {
        // δ nudged 1e-9 off a conic I vertex, so M − 1 ≈ 1e-10
        let a = ang(1.0, 0.7, 1.2, 1.5 + 1e-9);
        assert_eq!(classify(&a).vertex_type, VertexType::Elliptic);
        for br in enumerate_branches(&a).unwrap() {
            for s in br.sample_parameters(257) {
                let r = closure_residual(&a, &br.state(s).unwrap());
                assert!(r < 1e-12, "branch {} s={s}: {r:e}", br.branch_id);
            }
        }
        assert!(matches!(enumerate_branches(&ang(1.0, 0.7, 1.2, 1.5 + 2e-10)), Err(Error::NearDegenerate(_))));
    }

    #[test]
    fn out_of_domain() {
        let a = ang(FRAC_PI_3, FRAC_PI_2, 2.0 * PI / 5.0, FRAC_PI_4);
        let b = &enumerate_branches(&a).unwrap()[0];
        assert!(matches!(b.state(b.s_domain.hi + 1.0), Err(Error::OutOfDomain { .. })));
        assert!(matches!(b.state(f64::NAN), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn orthodiagonal_phase_is_half_period() {
        // cos α cos γ = cos β cos δ with β = π/2 = γ... pick δ from α, β, γ
        let (a, b, g) = (1.2f64, 1.0f64, 1.4f64);
        let d = (a.cos() * g.cos() / b.cos()).acos();
        let angles = ang(a, b, g, d);
        assert_eq!(classify(&angles).vertex_type, VertexType::Elliptic);
        assert!(classify(&angles).orthodiagonal);
        let (t1, _) = phase_shifts(&angles).unwrap();
        let ctx = elliptic_context(&angles);
        assert!((t1.imag_part - 0.5 * ctx.big_k_prime).abs() < 1e-10);
    }

    #[test]
    fn phase_shifts_need_conic_or_elliptic() {
        let sq = ang(FRAC_PI_2, FRAC_PI_2, FRAC_PI_2, FRAC_PI_2);
        assert_eq!(phase_shifts(&sq), Err(Error::TypeMismatch(VertexType::Square)));
    }

    #[test]
    fn infinity_points_follow_relabelling() {
        let a = ang(1.1, 1.3, 0.9, 1.7);
        let direct = solutions_at_infinity(&a);
        let rotated = solutions_at_infinity(&a.rotated());
        assert_eq!(direct.len(), rotated.len());
        for d in &direct {
            let r = d.state.rotated();
            assert!(rotated.iter().any(|o| o.state.max_difference(&r) < 1e-9));
        }
    }

    #[test]
    fn anti_isogram_flat_fold() {
        let a = ang(1.0, 0.6, PI - 1.0, PI - 0.6);
        let sols = solutions_at_infinity(&a);
        assert_eq!(sols.len(), 1);
        assert!(sols[0].isolated);
        assert!(sols[0].state.to_array().iter().all(|c| c.is_infinite()));
    }
}
