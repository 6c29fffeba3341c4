//! The uniqueness machinery: `F_{α,β}` membership, the two reduction
//! certificates, compression of a nonzero element to a nonzero element of
//! `M` inside the ideal it generates, and a harness that runs this against
//! a representation.
//!
//! Instead of choosing `x` among the regular paths (not computable), the
//! compression picks an eventually periodic `x ∈ Z(s(δ))` for which every
//! pair in the support of `b` admits one of the two certificates; that is
//! all the construction of `m` uses.

use std::fmt;

use thiserror::Error;

use crate::cycline::{
    is_aperiodic, is_cycline, is_in_m, Aperiodicity, AperiodicityVerdict, CyclineError,
    CyclineVerdict, Membership, MembershipVerdict,
};
use crate::diagonal::{pi, CylinderFunction, DiagonalError};
use crate::infpath::{diagonal_candidates_at, EvPeriodicPath, InfPathError};
use crate::kgraph::{Degree, Grade, GraphError, KGraph, Path};
use crate::kpalg::{KpAlgebra, KpElement, KpError, SpanningTerm};
use crate::representation::Representation;
use crate::ring::RingElem;
use crate::sampling::Sampler;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UniquenessError {
    #[error("(α, β) must satisfy s(α) = s(β) and α != β")]
    NotInSigma,
    #[error("x lies in F(α, β)")]
    InF,
    #[error("x does not lie in F(α, β)")]
    NotInF,
    #[error("element is zero")]
    ZeroElement,
    #[error("x must start at {0}")]
    WrongRange(String),
    #[error("search exhausted: {0}")]
    Exhausted(String),
    #[error("check failed: {0}")]
    CheckFailed(String),
    #[error(transparent)]
    Algebra(#[from] KpError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    InfPath(#[from] InfPathError),
    #[error(transparent)]
    Cycline(#[from] CyclineError),
    #[error(transparent)]
    Diagonal(#[from] DiagonalError),
}

/// `(α, β)` with `s(α) = s(β)`, `α != β`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FPair {
    alpha: Path,
    beta: Path,
}

impl FPair {
    pub fn new(alpha: Path, beta: Path) -> Result<Self, UniquenessError> {
        if alpha.source() != beta.source() || alpha == beta {
            return Err(UniquenessError::NotInSigma);
        }
        Ok(FPair { alpha, beta })
    }

    pub fn alpha(&self) -> &Path {
        &self.alpha
    }

    pub fn beta(&self) -> &Path {
        &self.beta
    }

    pub fn swapped(&self) -> FPair {
        FPair {
            alpha: self.beta.clone(),
            beta: self.alpha.clone(),
        }
    }
}

/// `x ∈ Z(α) ∩ Z(β)` and `σ^{d(α)}(x) = σ^{d(β)}(x)`.
pub fn f_membership(g: &KGraph, x: &EvPeriodicPath, pair: &FPair) -> Result<bool, UniquenessError> {
    if !x.in_cylinder(g, &pair.alpha)? || !x.in_cylinder(g, &pair.beta)? {
        return Ok(false);
    }
    let a = x.shift(g, pair.alpha.degree())?;
    let b = x.shift(g, pair.beta.degree())?;
    Ok(a.same_as(g, &b)?)
}

#[derive(Debug, Clone)]
pub struct InteriorCertificate {
    pub gamma: Path,
    /// `αγ`
    pub left: Path,
    /// `βγ`
    pub right: Path,
    pub verdict: CyclineVerdict,
}

/// For `x ∈ F(α,β)`: the first `γ = σ^{d(α)}(x)(0, n·1)` with `(αγ, βγ)`
/// certified cycline, which places `Z(αγ)` inside `F(α,β)`.
pub fn interior_certificate(
    alg: &KpAlgebra,
    x: &EvPeriodicPath,
    pair: &FPair,
    depth: u32,
) -> Result<Option<InteriorCertificate>, UniquenessError> {
    let g = alg.graph();
    if !f_membership(g, x, pair)? {
        return Err(UniquenessError::NotInF);
    }
    let tail = x.shift(g, pair.alpha.degree())?;
    for n in 0..=depth {
        let gamma = tail.initial(g, &Degree::diagonal(g.rank(), n))?;
        let left = g.compose(&pair.alpha, &gamma)?;
        let right = g.compose(&pair.beta, &gamma)?;
        let verdict = is_cycline(g, &left, &right, depth)?;
        if !verdict.is_cycline() {
            continue;
        }
        let sandwich = alg.product([
            &alg.projection(&left),
            &alg.term(&pair.alpha, &pair.beta)?,
            &alg.projection(&right),
        ])?;
        if !alg.equals(&sandwich, &alg.term(&left, &right)?)? {
            return Err(UniquenessError::CheckFailed(format!(
                "sandwich identity for γ = {}",
                g.format_path(&gamma)
            )));
        }
        return Ok(Some(InteriorCertificate {
            gamma,
            left,
            right,
            verdict,
        }));
    }
    Ok(None)
}

/// For `x ∉ F(α,β)`: `μ = ν = x(0, n)` for the first `n = d(α)∨d(β) + t·1`
/// with `s_μ s_{μ*} s_α s_{β*} s_ν s_{ν*} = 0`.
pub fn reduction_disjoint(
    alg: &KpAlgebra,
    x: &EvPeriodicPath,
    pair: &FPair,
    depth: u32,
) -> Result<Option<(Path, Path)>, UniquenessError> {
    let g = alg.graph();
    if f_membership(g, x, pair)? {
        return Err(UniquenessError::InF);
    }
    let base = pair.alpha.degree().join(pair.beta.degree());
    let middle = alg.term(&pair.alpha, &pair.beta)?;
    for t in 0..=depth {
        let n = &base + &Degree::diagonal(g.rank(), t);
        let mu = x.initial(g, &n)?;
        let p = alg.projection(&mu);
        if alg.is_zero(&alg.product([&p, &middle, &p])?)? {
            return Ok(Some((mu.clone(), mu)));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone)]
pub struct VertexPair {
    pub delta: Path,
    pub epsilon: Path,
    /// `s_{δ*} a s_ε`
    pub b: KpElement,
    /// The coefficient `r` in `b_0 = r p_{s(δ)}`.
    pub r: RingElem,
}

/// Finds `(δ, ε)` with `b = s_{δ*} a s_ε != 0` and zero-graded part
/// `r p_{s(δ)}`, `r != 0`. Candidates are the terms of `a` in normal form
/// at `m + j·1` (`m` the beta join), `j = 0..=bound`, in canonical order.
pub fn find_vertex_pair(
    alg: &KpAlgebra,
    a: &KpElement,
    bound: u32,
) -> Result<VertexPair, UniquenessError> {
    let g = alg.graph();
    if alg.is_zero(a)? {
        return Err(UniquenessError::ZeroElement);
    }
    let m = alg.beta_join(a);
    let zero = Grade::zero(g.rank());
    for j in 0..=bound {
        let nf = alg.normal_form(a, &(&m + &Degree::diagonal(g.rank(), j)))?;
        for (t, _) in nf.terms() {
            let b = alg.product([&alg.t(t.alpha()), a, &alg.s(t.beta())])?;
            let b0 = alg.graded_component(&b, &zero)?;
            let v = g.vertex_path(t.alpha().source());
            let vt = SpanningTerm::new(v.clone(), v).expect("vertex term");
            let Some(r) = b0.coefficient(&vt).cloned() else {
                continue;
            };
            if b0.len() == 1 && !alg.is_zero(&b)? {
                return Ok(VertexPair {
                    delta: t.alpha().clone(),
                    epsilon: t.beta().clone(),
                    b,
                    r,
                });
            }
        }
    }
    Err(UniquenessError::Exhausted(format!(
        "no vertex pair with extension up to {bound}"
    )))
}

#[derive(Debug, Clone)]
pub enum PairCertificate {
    Interior {
        pair: FPair,
        cert: InteriorCertificate,
    },
    Disjoint {
        pair: FPair,
        mu: Path,
        nu: Path,
    },
}

impl PairCertificate {
    pub fn describe(&self, g: &KGraph) -> String {
        match self {
            PairCertificate::Interior { pair, cert } => format!(
                "({}, {}): x in F, interior via γ = {}, ({}, {}) cycline",
                g.format_path(&pair.alpha),
                g.format_path(&pair.beta),
                g.format_path(&cert.gamma),
                g.format_path(&cert.left),
                g.format_path(&cert.right)
            ),
            PairCertificate::Disjoint { pair, mu, nu } => format!(
                "({}, {}): x not in F, μ = {}, ν = {}",
                g.format_path(&pair.alpha),
                g.format_path(&pair.beta),
                g.format_path(mu),
                g.format_path(nu)
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompressBounds {
    /// Cycline depth and certificate search depth.
    pub depth: u32,
    /// Vertex-pair extension bound and candidate cycle length bound.
    pub bound: u32,
}

impl Default for CompressBounds {
    fn default() -> Self {
        CompressBounds {
            depth: crate::cycline::DEFAULT_DEPTH,
            bound: 8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Compression {
    pub vertex_pair: VertexPair,
    pub x: EvPeriodicPath,
    pub certificates: Vec<PairCertificate>,
    pub m: KpElement,
    /// `m = left · a · right`.
    pub left: KpElement,
    pub right: KpElement,
    /// `π(m_0)`.
    pub m0: CylinderFunction,
    /// `1_U`.
    pub u: CylinderFunction,
    pub membership: MembershipVerdict,
}

impl Compression {
    pub fn report(&self, alg: &KpAlgebra) -> String {
        let g = alg.graph();
        let mut lines = vec![
            format!(
                "δ = {}, ε = {}",
                g.format_path(&self.vertex_pair.delta),
                g.format_path(&self.vertex_pair.epsilon)
            ),
            format!("b = {}", alg.show(&self.vertex_pair.b)),
            format!("x = {}", self.x.display(g)),
        ];
        lines.extend(self.certificates.iter().map(|c| c.describe(g)));
        lines.push(format!("m = {}", alg.show(&self.m)));
        lines.push(format!("in M: {}", self.membership.status));
        lines.push(format!(
            "π(m_0) = {} · 1_U, 1_U = {}",
            self.vertex_pair.r,
            self.u.display(g)
        ));
        lines.join("\n")
    }
}

fn certify_all(
    alg: &KpAlgebra,
    x: &EvPeriodicPath,
    pairs: &[FPair],
    depth: u32,
) -> Result<Option<Vec<PairCertificate>>, UniquenessError> {
    let g = alg.graph();
    let mut out = Vec::with_capacity(pairs.len());
    for pair in pairs {
        if f_membership(g, x, pair)? {
            match interior_certificate(alg, x, pair, depth)? {
                Some(cert) => out.push(PairCertificate::Interior {
                    pair: pair.clone(),
                    cert,
                }),
                None => return Ok(None),
            }
        } else {
            match reduction_disjoint(alg, x, pair, depth)? {
                Some((mu, nu)) => out.push(PairCertificate::Disjoint {
                    pair: pair.clone(),
                    mu,
                    nu,
                }),
                None => return Ok(None),
            }
        }
    }
    Ok(Some(out))
}

/// Turns a nonzero `a` into a nonzero `m ∈ M` of the form `u · a · w`.
///
/// Every step is checked: `m = u a w`, `m != 0`, `m ∈ M` is not refuted,
/// `π(m_0) = r 1_U` and `x ∈ U`.
pub fn compress_to_cycline(
    alg: &KpAlgebra,
    a: &KpElement,
    x: Option<&EvPeriodicPath>,
    bounds: CompressBounds,
) -> Result<Compression, UniquenessError> {
    let g = alg.graph();
    let vp = find_vertex_pair(alg, a, bounds.bound)?;
    let v = vp.delta.source();
    let pairs: Vec<FPair> =
        vp.b.terms()
            .filter(|(t, _)| !t.grade().is_zero())
            .map(|(t, _)| FPair::new(t.alpha().clone(), t.beta().clone()))
            .collect::<Result<_, _>>()?;

    let (x, certificates) = match x {
        Some(x) => {
            if x.range() != v {
                return Err(UniquenessError::WrongRange(g.vertex_name(v).to_string()));
            }
            let certs = certify_all(alg, x, &pairs, bounds.depth)?.ok_or_else(|| {
                UniquenessError::Exhausted(format!("certificates for x = {}", x.display(g)))
            })?;
            (x.clone(), certs)
        }
        None => {
            let mut seen: Vec<EvPeriodicPath> = Vec::new();
            let mut found = None;
            'search: for t in 1..=bounds.bound {
                for cand in diagonal_candidates_at(g, v, t) {
                    if seen.iter().any(|y| y.same_as(g, &cand).unwrap_or(false)) {
                        continue;
                    }
                    if let Some(certs) = certify_all(alg, &cand, &pairs, bounds.depth)? {
                        found = Some((cand, certs));
                        break 'search;
                    }
                    seen.push(cand);
                }
            }
            found.ok_or_else(|| {
                UniquenessError::Exhausted(format!(
                    "no suitable x at {} within cycle length {}",
                    g.vertex_name(v),
                    bounds.bound
                ))
            })?
        }
    };

    let mut left_diag = Vec::new();
    let mut right_diag = Vec::new();
    let mut indicators = vec![CylinderFunction::indicator(alg.ring(), &g.vertex_path(v))];
    let mut left_mu = Vec::new();
    let mut right_nu = Vec::new();
    for c in &certificates {
        match c {
            PairCertificate::Interior { cert, .. } => {
                left_diag.push(cert.left.clone());
                right_diag.push(cert.right.clone());
            }
            PairCertificate::Disjoint { mu, nu, .. } => {
                left_mu.push(mu.clone());
                right_nu.push(nu.clone());
            }
        }
    }
    let ordered_left: Vec<&Path> = left_diag.iter().chain(&left_mu).collect();
    let ordered_right: Vec<&Path> = right_nu.iter().chain(&right_diag).collect();
    for p in ordered_left.iter().chain(&ordered_right) {
        indicators.push(CylinderFunction::indicator(alg.ring(), p));
    }
    let projections = |ps: &[&Path]| -> Result<KpElement, KpError> {
        let ps: Vec<KpElement> = ps.iter().map(|p| alg.projection(p)).collect();
        alg.product(&ps)
    };
    let left = alg.mul(&projections(&ordered_left)?, &alg.t(&vp.delta))?;
    let right = alg.mul(&alg.s(&vp.epsilon), &projections(&ordered_right)?)?;
    let m = alg.product([&left, a, &right])?;

    let via_b = alg.product([
        &projections(&ordered_left)?,
        &vp.b,
        &projections(&ordered_right)?,
    ])?;
    if !alg.equals(&m, &via_b)? {
        return Err(UniquenessError::CheckFailed("m != u a w".into()));
    }
    if alg.is_zero(&m)? {
        return Err(UniquenessError::CheckFailed("m = 0".into()));
    }
    let membership = is_in_m(alg, &m, bounds.depth)?;
    if membership.status == Membership::No {
        return Err(UniquenessError::CheckFailed("m is not in M".into()));
    }
    let m0 = pi(alg, &alg.graded_component(&m, &Grade::zero(g.rank()))?)?;
    let mut u = CylinderFunction::one(g, alg.ring());
    for f in &indicators {
        u = u.mul(g, f)?;
    }
    if !m0.equals(g, &u.scale(&vp.r))? {
        return Err(UniquenessError::CheckFailed("π(m_0) != r 1_U".into()));
    }
    if !u.evaluate(g, &x)?.is_one() {
        return Err(UniquenessError::CheckFailed("x is not in U".into()));
    }
    Ok(Compression {
        vertex_pair: vp,
        x,
        certificates,
        m,
        left,
        right,
        m0,
        u,
        membership,
    })
}

/// Monomials `s_α s_{β*}` with `d(α), d(β) <= degree·1` and the
/// differences of any two of them, dropping elements that are zero.
pub fn kernel_candidates(alg: &KpAlgebra, degree: u32) -> Result<Vec<KpElement>, KpError> {
    let g = alg.graph();
    let paths = g.paths_up_to(&Degree::diagonal(g.rank(), degree));
    let mut monomials = Vec::new();
    for a in &paths {
        for b in paths.iter().filter(|b| b.source() == a.source()) {
            monomials.push(alg.term(a, b)?);
        }
    }
    let mut out = Vec::new();
    for (i, x) in monomials.iter().enumerate() {
        out.push(x.clone());
        for y in &monomials[i + 1..] {
            let d = alg.sub(x, y)?;
            if !alg.is_zero(&d)? {
                out.push(d);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UniquenessOptions {
    pub bounds: CompressBounds,
    /// Degree bound for [`kernel_candidates`].
    pub candidate_degree: u32,
    pub random_samples: usize,
    pub seed: u64,
}

impl Default for UniquenessOptions {
    fn default() -> Self {
        UniquenessOptions {
            bounds: CompressBounds::default(),
            candidate_degree: 2,
            random_samples: 20,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct KernelFinding {
    pub element: KpElement,
    pub compression: Result<Compression, UniquenessError>,
    /// `m` is a nonzero kernel element of `M`.
    pub confirmed: bool,
}

#[derive(Debug, Clone)]
pub struct UniquenessReport {
    pub representation: String,
    pub checked: usize,
    pub kernel: Vec<KernelFinding>,
    pub aperiodicity: AperiodicityVerdict,
    /// `r p_v` is not annihilated for every vertex and sampled `r != 0`.
    pub vertex_images_nonzero: bool,
    pub consistent: bool,
}

impl UniquenessReport {
    pub fn injective_on_samples(&self) -> bool {
        self.kernel.is_empty()
    }
}

impl fmt::Display for UniquenessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "representation: {}", self.representation)?;
        writeln!(f, "elements checked: {}", self.checked)?;
        writeln!(f, "kernel elements found: {}", self.kernel.len())?;
        let confirmed = self.kernel.iter().filter(|k| k.confirmed).count();
        writeln!(f, "compressed to nonzero kernel elements of M: {confirmed}")?;
        writeln!(
            f,
            "graph: {} ({})",
            self.aperiodicity.status, self.aperiodicity.detail
        )?;
        writeln!(f, "r p_v never annihilated: {}", self.vertex_images_nonzero)?;
        if self.kernel.is_empty() {
            writeln!(f, "no kernel samples: consistent with injectivity")?;
        } else {
            writeln!(f, "restriction to M is not injective")?;
        }
        write!(
            f,
            "{}",
            if self.consistent {
                "consistent"
            } else {
                "INCONSISTENT"
            }
        )
    }
}

/// Searches for kernel elements among `samples`, [`kernel_candidates`] and
/// seeded random elements, compresses each one found, and checks that the
/// result is a nonzero kernel element of `M`. On an aperiodic graph, also
/// checks that a representation not killing any `r p_v` has no kernel
/// samples.
pub fn uniqueness_check(
    rep: &dyn Representation,
    alg: &KpAlgebra,
    samples: &[KpElement],
    opts: UniquenessOptions,
) -> Result<UniquenessReport, UniquenessError> {
    let g = alg.graph();
    let mut pool: Vec<KpElement> = samples.to_vec();
    pool.extend(kernel_candidates(alg, opts.candidate_degree)?);
    let mut sampler = Sampler::new(
        g,
        Degree::diagonal(g.rank(), opts.candidate_degree),
        opts.seed,
    );
    for _ in 0..opts.random_samples {
        pool.push(sampler.nonzero_element(alg, 3));
    }

    let mut kernel = Vec::new();
    let mut checked = 0;
    for a in pool {
        if alg.is_zero(&a)? {
            continue;
        }
        checked += 1;
        if !rep.annihilates(alg, &a)? {
            continue;
        }
        let compression = compress_to_cycline(alg, &a, None, opts.bounds);
        let confirmed = match &compression {
            Ok(c) => {
                c.membership.status == Membership::Yes
                    && rep.annihilates(alg, &c.m)?
                    && !alg.is_zero(&c.m)?
            }
            Err(_) => false,
        };
        kernel.push(KernelFinding {
            element: a,
            compression,
            confirmed,
        });
    }

    let mut vertex_images_nonzero = true;
    for v in g.vertices() {
        for r in alg.ring().sample_nonzero() {
            let rp = alg.scale(&alg.p(v), &r)?;
            if rep.annihilates(alg, &rp)? {
                vertex_images_nonzero = false;
            }
        }
    }
    let aperiodicity = is_aperiodic(g, opts.bounds.depth)?;
    let mut consistent = kernel.iter().all(|k| k.confirmed);
    if aperiodicity.status == Aperiodicity::Aperiodic && vertex_images_nonzero && !kernel.is_empty()
    {
        consistent = false;
    }
    Ok(UniquenessReport {
        representation: rep.name(),
        checked,
        kernel,
        aperiodicity,
        vertex_images_nonzero,
        consistent,
    })
}
