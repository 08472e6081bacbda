//! Checks of the volume inequalities and identities, one report per check.
//!
//! All quantities are exact. Inequality reports are oriented so that
//! `gap = rhs − lhs ≥ 0` means the inequality holds.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::constructions::{
    antiblocking_section, cartesian_power, diagonal_embed, factor_embed, hat_symmetrization, is_antiblocking,
    is_simplex, project_onto, zero_outside, CoordinateSubset,
};
use crate::covers::{all_covers, binomial, compositions, factorial, induced_one_cover, multinomial, UniformCover};
use crate::error::{invalid, Error, Result};
use crate::mixed::{mixed_volume_cached, MixedVolumeQuery, VolumeCache};
use crate::polytope::{check_dim_cap, VPolytope};
use crate::rational::Rational;
use crate::report::{ReportParams, VerificationReport};

fn big(x: BigInt) -> Rational {
    Rational::from_integer(x)
}

fn pow(x: &Rational, e: usize) -> Rational {
    num_traits::pow(x.clone(), e)
}

/// `(n!)ᵖ / (pn)!`.
fn factor_coefficient(n: usize, p: usize) -> Rational {
    Rational::new(num_traits::pow(factorial(n), p), factorial(p * n))
}

fn validate_kvec(n: usize, p: usize, kvec: &[usize]) -> Result<usize> {
    if kvec.len() != p {
        return Err(invalid(format!("expected {p} entries in kvec, got {}", kvec.len())));
    }
    if let Some(k) = kvec.iter().find(|&&k| k > n) {
        return Err(invalid(format!("kvec entry {k} exceeds n = {n}")));
    }
    let k: usize = kvec.iter().sum();
    if k > n {
        return Err(invalid(format!("kvec sums to {k}, which exceeds n = {n}")));
    }
    Ok(k)
}

fn require_antiblocking(body: &VPolytope) -> Result<()> {
    if is_antiblocking(body) {
        Ok(())
    } else {
        Err(Error::NotAntiBlocking)
    }
}

/// Shared state for a batch of checks: the volume cache and the dimension cap
/// override.
#[derive(Debug)]
pub struct Verifier {
    cache: VolumeCache,
    force: bool,
    cross_checks: bool,
}

impl Default for Verifier {
    fn default() -> Self {
        Self::new()
    }
}

impl Verifier {
    pub fn new() -> Self {
        Self { cache: VolumeCache::new(), force: false, cross_checks: true }
    }

    /// Lifts the `pn ≤ 8` cap.
    pub fn with_force(mut self, force: bool) -> Self {
        self.force = force;
        self
    }

    /// Toggles the secondary computations attached as witnesses (expansion
    /// identities, per-cover recomputation). On by default.
    pub fn with_cross_checks(mut self, on: bool) -> Self {
        self.cross_checks = on;
        self
    }

    pub fn cache(&self) -> &VolumeCache {
        &self.cache
    }

    fn cap(&self, dim: usize) -> Result<()> {
        check_dim_cap(dim, self.force)
    }

    fn mv(&self, q: &MixedVolumeQuery) -> Result<Rational> {
        mixed_volume_cached(q, Some(&self.cache))
    }

    /// `V(−Δ_p A[m₀], ι₁B₁[m₁], …, ι_pB_p[m_p])` in `(ℝⁿ)ᵖ`.
    fn cokernel_mixed(&self, a: &VPolytope, bs: &[&VPolytope], mults: &[usize]) -> Result<Rational> {
        let p = bs.len();
        if p == 0 {
            return Ok(Rational::one());
        }
        let mut q = MixedVolumeQuery::new(a.dim() * p);
        q.push(&diagonal_embed(a, p)?.neg(), mults[0])?;
        for (i, b) in bs.iter().enumerate() {
            q.push(&factor_embed(b, i, p)?, mults[i + 1])?;
        }
        self.mv(&q)
    }

    /// `V(−Δ_pK[k], ι₁K[n−k₁], …, ι_pK[n−k_p])`.
    pub fn conjecture2_lhs(&self, body: &VPolytope, p: usize, kvec: &[usize]) -> Result<Rational> {
        let n = body.dim();
        let k = validate_kvec(n, p, kvec)?;
        self.cap(p * n)?;
        let mut mults = vec![k];
        mults.extend(kvec.iter().map(|&ki| n - ki));
        self.cokernel_mixed(body, &vec![body; p], &mults)
    }

    /// `V(−Δ_pK[k], Kᵖ[pn−k])`.
    pub fn conjecture1_lhs(&self, body: &VPolytope, p: usize, k: usize) -> Result<Rational> {
        let n = body.dim();
        if p == 0 || k > n {
            return Err(invalid(format!("need p ≥ 1 and 0 ≤ k ≤ n, got p = {p}, k = {k}")));
        }
        self.cap(p * n)?;
        let q = MixedVolumeQuery::new(p * n)
            .with(&diagonal_embed(body, p)?.neg(), k)?
            .with(&cartesian_power(body, p)?, p * n - k)?;
        self.mv(&q)
    }

    /// `Σ_{k₁+…+k_p=k} (pn−k)!/∏(n−kᵢ)! · V(−Δ_pK[k], ι₁K[n−k₁], …)`, the
    /// multilinear expansion of [`Self::conjecture1_lhs`].
    pub fn conjecture1_expansion(&self, body: &VPolytope, p: usize, k: usize) -> Result<Rational> {
        let n = body.dim();
        let mut total = Rational::zero();
        for kvec in compositions(k, p, n) {
            let parts: Vec<usize> = kvec.iter().map(|&ki| n - ki).collect();
            let weight = big(multinomial(p * n - k, &parts));
            total += weight * self.conjecture2_lhs(body, p, &kvec)?;
        }
        Ok(total)
    }

    /// `Σ_k C(pn, k)·V(−Δ_pK[k], Kᵖ[pn−k])`, which equals `vol(D_pK)`.
    pub fn schneider_expansion(&self, body: &VPolytope, p: usize) -> Result<Rational> {
        let n = body.dim();
        let mut total = Rational::zero();
        for k in 0..=n {
            total += big(binomial(p * n, k)) * self.conjecture1_lhs(body, p, k)?;
        }
        Ok(total)
    }

    pub fn rogers_shephard(&self, body: &VPolytope) -> Result<VerificationReport> {
        let n = body.dim();
        self.cap(n)?;
        let lhs = body.minkowski_sum(&body.neg())?.volume();
        let rhs = big(binomial(2 * n, n)) * body.volume();
        let expected = !body.is_full_dimensional() || is_simplex(body);
        Ok(VerificationReport::inequality("rogers-shephard", ReportParams { n: Some(n), ..Default::default() }, lhs, rhs)
            .with_expected_equality(expected)
            .with_proven(true)
            .with_bodies(std::slice::from_ref(body)))
    }

    pub fn godbersen(&self, body: &VPolytope, k: usize) -> Result<VerificationReport> {
        let n = body.dim();
        if k > n {
            return Err(invalid(format!("k = {k} exceeds n = {n}")));
        }
        self.cap(n)?;
        let q = MixedVolumeQuery::new(n).with(&body.neg(), k)?.with(body, n - k)?;
        let lhs = self.mv(&q)?;
        let rhs = big(binomial(n, k)) * body.volume();
        let trivial = k == 0 || k == n || !body.is_full_dimensional();
        let proven = trivial || k == 1 || k + 1 == n || is_antiblocking(body);
        let params = ReportParams { n: Some(n), k: Some(k), ..Default::default() };
        Ok(VerificationReport::inequality("godbersen", params, lhs, rhs)
            .with_expected_equality(trivial || is_simplex(body))
            .with_proven(proven)
            .with_bodies(std::slice::from_ref(body)))
    }

    pub fn schneider(&self, body: &VPolytope, p: usize) -> Result<VerificationReport> {
        let n = body.dim();
        if p == 0 {
            return Err(invalid("p must be positive"));
        }
        self.cap(p * n)?;
        let dp = diagonal_embed(body, p)?.minkowski_sum(&cartesian_power(body, p)?.neg())?;
        let lhs = dp.volume();
        let rhs = big(binomial(p * n + n, n)) * pow(&body.volume(), p);
        let mut report = VerificationReport::inequality("schneider", ReportParams::np(n, p), lhs.clone(), rhs)
            .with_expected_equality(!body.is_full_dimensional() || is_simplex(body))
            .with_proven(true)
            .with_bodies(std::slice::from_ref(body));
        if self.cross_checks {
            let expansion = self.schneider_expansion(body, p)?;
            report.witnesses.push(
                VerificationReport::identity("schneider-expansion", ReportParams::np(n, p), lhs, expansion)
                    .with_note("volume of D_pK against the sum over k of C(pn,k) times the conj1 left-hand side"),
            );
        }
        Ok(report)
    }

    pub fn conjecture1(&self, body: &VPolytope, p: usize, k: usize) -> Result<VerificationReport> {
        let n = body.dim();
        let lhs = self.conjecture1_lhs(body, p, k)?;
        let vol_p = pow(&body.volume(), p);
        let rhs = big(binomial(n, k)) * &vol_p;
        let antiblocking = is_antiblocking(body);
        let trivial = k == 0 || !body.is_full_dimensional();
        let proven = trivial || antiblocking || n == 1 || (p == 1 && (k == 1 || k + 1 == n || k == n));
        let params = ReportParams { n: Some(n), p: Some(p), k: Some(k), ..Default::default() };
        let mut report = VerificationReport::inequality("conj1", params, lhs, rhs)
            .with_expected_equality(trivial || is_simplex(body))
            .with_proven(proven)
            .with_bodies(std::slice::from_ref(body));
        if k == n && k > 0 {
            // Equality clause applied as stated; the per-term breakdown shows
            // which summands are forced equalities.
            report.notes.push("k = n: equality clause encoded as stated; per-term breakdown in witnesses".into());
            for kvec in compositions(k, p, n) {
                report.witnesses.push(self.conjecture2(body, p, &kvec)?);
            }
        }
        Ok(report)
    }

    pub fn conjecture2(&self, body: &VPolytope, p: usize, kvec: &[usize]) -> Result<VerificationReport> {
        let n = body.dim();
        let k = validate_kvec(n, p, kvec)?;
        let lhs = self.conjecture2_lhs(body, p, kvec)?;
        let rhs = big(binomial(n, k) * multinomial(k, kvec)) * factor_coefficient(n, p) * pow(&body.volume(), p);
        let antiblocking = is_antiblocking(body);
        let forced = k == 0 || kvec.contains(&n) || !body.is_full_dimensional();
        let proven = forced || antiblocking || n == 1 || (p == 1 && (k == 1 || k + 1 == n || k == n));
        let params = ReportParams { n: Some(n), p: Some(p), k: Some(k), kvec: Some(kvec.to_vec()), ..Default::default() };
        let mut report = VerificationReport::inequality("conj2", params.clone(), lhs.clone(), rhs)
            .with_expected_equality(forced || is_simplex(body))
            .with_proven(proven)
            .with_bodies(std::slice::from_ref(body));
        if antiblocking && self.cross_checks {
            let sizes = cover_sizes(n, kvec);
            let mut sum = Rational::zero();
            for cover in all_covers(n, p).into_iter().filter(|c| c.sizes() == sizes) {
                let w = self.per_cover_check(body, p, kvec, &cover)?;
                sum += &w.rhs;
                report.witnesses.push(w);
            }
            report.witnesses.push(
                VerificationReport::identity("cover-sum", params, lhs, sum)
                    .with_note("direct left-hand side against the sum of per-cover closed forms"),
            );
        }
        Ok(report)
    }

    /// Checks the reduction of a boundary instance to `p − 1` factors.
    ///
    /// A zero slot `kᵢ = 0` contributes `ι_iK[n]`, which splits off as
    /// `vol(K)/C(pn, n)`. When `k = n` without a zero slot, the symmetry in
    /// `(m₀, …, m_p)` first trades `m₀` for `m_i` to create one.
    pub fn conjecture2_reduction(&self, body: &VPolytope, p: usize, kvec: &[usize]) -> Result<VerificationReport> {
        let n = body.dim();
        let k = validate_kvec(n, p, kvec)?;
        let lhs = self.conjecture2_lhs(body, p, kvec)?;
        let mut witnesses = Vec::new();
        let (slot, reduced_source) = match kvec.iter().position(|&ki| ki == 0) {
            Some(i) => (i, kvec.to_vec()),
            None if k == n => {
                let i = 0;
                let mut swapped = kvec.to_vec();
                swapped[i] = 0;
                let swapped_lhs = self.conjecture2_lhs(body, p, &swapped)?;
                witnesses.push(
                    VerificationReport::identity(
                        "slot-symmetry",
                        ReportParams { n: Some(n), p: Some(p), kvec: Some(swapped.clone()), ..Default::default() },
                        lhs.clone(),
                        swapped_lhs,
                    )
                    .with_note(format!("multiplicities of slot 0 and slot {} exchanged", i + 1)),
                );
                (i, swapped)
            }
            None => return Err(invalid("reduction needs some kᵢ = 0 or k = n")),
        };
        let mut reduced = reduced_source.clone();
        reduced.remove(slot);
        let lower = self.conjecture2_lhs(body, p - 1, &reduced)?;
        let rhs = body.volume() / big(binomial(p * n, n)) * lower;
        let params = ReportParams { n: Some(n), p: Some(p), k: Some(k), kvec: Some(kvec.to_vec()), ..Default::default() };
        Ok(VerificationReport::identity("conj2-reduction", params, lhs, rhs)
            .with_note(format!("slot {} split off, leaving kvec {:?} with p = {}", slot + 1, reduced, p - 1))
            .with_bodies(std::slice::from_ref(body))
            .with_witnesses(witnesses))
    }

    /// `multinomial(pn; k, n−k₁, …, n−k_p)⁻¹ · vol_k(K_{σ₀}) · ∏ vol_{n−kᵢ}(K_{σᵢ})`.
    pub fn per_cover_closed_form(
        &self,
        body: &VPolytope,
        p: usize,
        kvec: &[usize],
        cover: &UniformCover,
    ) -> Result<Rational> {
        let n = body.dim();
        validate_kvec(n, p, kvec)?;
        let sizes = cover_sizes(n, kvec);
        if cover.n() != n || cover.p() != p || cover.sizes() != sizes {
            return Err(invalid(format!("cover {cover} does not have block sizes {sizes:?}")));
        }
        let mut value = Rational::one() / big(multinomial(p * n, &sizes));
        for block in cover.blocks() {
            value *= antiblocking_section(body, block)?.volume();
        }
        Ok(value)
    }

    /// The closed form against `V(−Δ_pK_{σ₀}[k], ι₁K_{σ₁}[n−k₁], …)` computed
    /// as a mixed volume. The report's `rhs` is the closed form.
    pub fn per_cover_check(
        &self,
        body: &VPolytope,
        p: usize,
        kvec: &[usize],
        cover: &UniformCover,
    ) -> Result<VerificationReport> {
        let n = body.dim();
        let closed = self.per_cover_closed_form(body, p, kvec, cover)?;
        let pieces: Vec<VPolytope> = cover.blocks().iter().map(|b| zero_outside(body, b)).collect();
        let sizes = cover.sizes();
        let direct = self.cokernel_mixed(&pieces[0], &pieces[1..].iter().collect::<Vec<_>>(), &sizes)?;
        let params = ReportParams {
            n: Some(n),
            p: Some(p),
            kvec: Some(kvec.to_vec()),
            cover: Some(cover.blocks().iter().map(CoordinateSubset::one_based).collect()),
            ..Default::default()
        };
        Ok(VerificationReport::identity("per-cover", params, direct, closed))
    }

    /// Dual Bollobás–Thomason bound for `K̂` and its equality condition.
    ///
    /// `lhs` is the section bound `∏|σᵢ|!/(n!)ᵖ · ∏ vol(K̂ ∩ E_σᵢ)` and `rhs` is
    /// `vol(K̂)ᵖ`.
    pub fn dual_bt(&self, body: &VPolytope, cover: &UniformCover) -> Result<VerificationReport> {
        let n = body.dim();
        if cover.n() != n {
            return Err(Error::DimensionMismatch { expected: n, found: cover.n() });
        }
        self.cap(n)?;
        let hat = hat_symmetrization(body)?;
        if !hat.is_full_dimensional() {
            return Err(Error::OriginNotInterior);
        }
        let p = cover.p();
        let mut bound = Rational::one() / big(num_traits::pow(factorial(n), p));
        let mut direct = bound.clone();
        for block in cover.blocks() {
            let s = block.len();
            let section = big(BigInt::from(1u8) << s) * antiblocking_section(body, block)?.volume();
            bound *= big(factorial(s)) * section;
            direct *= big(factorial(s)) * project_onto(&hat, block).volume();
        }
        let rhs = pow(&hat.volume(), p);

        let induced = induced_one_cover(cover).nonempty_blocks();
        let pts = induced.iter().flat_map(|b| zero_outside(&hat, b).vertices().to_vec()).collect();
        let spanned = VPolytope::hull_in(n, pts)?;
        let params = ReportParams {
            n: Some(n),
            p: Some(p),
            cover: Some(cover.blocks().iter().map(CoordinateSubset::one_based).collect()),
            ..Default::default()
        };
        let mut report = VerificationReport::inequality("dual-bt", params.clone(), bound.clone(), rhs)
            .with_expected_equality(spanned == hat)
            .with_proven(true)
            .with_bodies(std::slice::from_ref(body));
        if self.cross_checks {
            report.witnesses.push(
                VerificationReport::identity("hat-sections", params, bound, direct)
                    .with_note("sections of K̂ from the anti-blocking sections against direct projection of K̂"),
            );
        }
        Ok(report)
    }

    /// `vol(−Δ_pK + Σ ι_i L⁽ⁱ⁾)` against the sum of its cover pieces.
    pub fn decomposition(&self, body: &VPolytope, ls: &[VPolytope]) -> Result<VerificationReport> {
        let n = body.dim();
        let p = ls.len();
        if p == 0 {
            return Err(invalid("need at least one L body"));
        }
        if let Some(l) = ls.iter().find(|l| l.dim() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: l.dim() });
        }
        self.cap(p * n)?;
        require_antiblocking(body)?;
        for l in ls {
            require_antiblocking(l)?;
        }
        let combined = |a: &VPolytope, bs: &[VPolytope]| -> Result<VPolytope> {
            let mut acc = diagonal_embed(a, p)?.neg();
            for (i, b) in bs.iter().enumerate() {
                acc = acc.minkowski_sum(&factor_embed(b, i, p)?)?;
            }
            Ok(acc)
        };
        let lhs = combined(body, ls)?.volume();
        let mut rhs = Rational::zero();
        let mut witnesses = Vec::new();
        for cover in all_covers(n, p) {
            let blocks = cover.blocks();
            let a = zero_outside(body, &blocks[0]);
            let bs: Vec<VPolytope> = ls.iter().zip(&blocks[1..]).map(|(l, b)| zero_outside(l, b)).collect();
            let piece = combined(&a, &bs)?.volume();
            let mut product = project_onto(body, &blocks[0]).volume();
            for (l, b) in ls.iter().zip(&blocks[1..]) {
                product *= project_onto(l, b).volume();
            }
            let params = ReportParams {
                n: Some(n),
                p: Some(p),
                cover: Some(blocks.iter().map(CoordinateSubset::one_based).collect()),
                ..Default::default()
            };
            rhs += &piece;
            witnesses.push(VerificationReport::identity("decomposition-piece", params, piece, product));
        }
        let mut bodies = vec![body.clone()];
        bodies.extend(ls.iter().cloned());
        Ok(VerificationReport::identity("decomposition", ReportParams::np(n, p), lhs, rhs)
            .with_bodies(&bodies)
            .with_witnesses(witnesses))
    }

    /// The coefficient `c = k₀!⋯k_p!(pn)!/(n!)^{p+1} · V(−Δ_pK[n−k₀], ι₁K[n−k₁], …)`
    /// checked against `vol(K)ᵖ`.
    pub fn alesker_coefficient(&self, body: &VPolytope, p: usize, partition: &[usize]) -> Result<VerificationReport> {
        let n = body.dim();
        if partition.len() != p + 1 {
            return Err(invalid(format!("expected {} partition entries, got {}", p + 1, partition.len())));
        }
        if partition.iter().sum::<usize>() != n {
            return Err(invalid(format!("partition {partition:?} does not sum to n = {n}")));
        }
        let kvec = &partition[1..];
        let mixed = self.conjecture2_lhs(body, p, kvec)?;
        let weight: BigInt = partition.iter().map(|&k| factorial(k)).product::<BigInt>() * factorial(p * n);
        let c = big(weight) / big(num_traits::pow(factorial(n), p + 1)) * mixed;
        let rhs = pow(&body.volume(), p);
        let k: usize = kvec.iter().sum();
        let forced = k == 0 || kvec.contains(&n) || !body.is_full_dimensional();
        let proven = forced || is_antiblocking(body) || n == 1 || (p == 1 && (k == 1 || k + 1 == n || k == n));
        let params = ReportParams { n: Some(n), p: Some(p), partition: Some(partition.to_vec()), ..Default::default() };
        Ok(VerificationReport::inequality("alesker", params, c, rhs)
            .with_expected_equality(forced || is_simplex(body))
            .with_proven(proven)
            .with_note("stated for smooth bodies; polytopes are covered by continuity and may attain equality")
            .with_bodies(std::slice::from_ref(body)))
    }
}

/// `(k, n−k₁, …, n−k_p)`.
fn cover_sizes(n: usize, kvec: &[usize]) -> Vec<usize> {
    let mut sizes = vec![kvec.iter().sum()];
    sizes.extend(kvec.iter().map(|&ki| n - ki));
    sizes
}

/// The Vandermonde identities as reports: `Σ_k C(pn,k)C(n,k) = C(pn+n,n)`
/// without `k`, `Σ_{k₁+…+k_p=k} ∏C(n,kᵢ) = C(pn,k)` with it.
pub fn vandermonde_report(n: usize, p: usize, k: Option<usize>) -> Result<VerificationReport> {
    match k {
        None => {
            let lhs: BigInt = (0..=n).map(|k| binomial(p * n, k) * binomial(n, k)).sum();
            Ok(VerificationReport::identity("vandermonde", ReportParams::np(n, p), big(lhs), big(binomial(p * n + n, n))))
        }
        Some(k) if k > n => Err(invalid(format!("k = {k} exceeds n = {n}"))),
        Some(k) => {
            let lhs: BigInt = compositions(k, p, n)
                .iter()
                .map(|ks| ks.iter().map(|&ki| binomial(n, ki)).product::<BigInt>())
                .sum();
            let params = ReportParams { k: Some(k), ..ReportParams::np(n, p) };
            Ok(VerificationReport::identity("vandermonde", params, big(lhs), big(binomial(p * n, k))))
        }
    }
}

pub fn check_rogers_shephard(body: &VPolytope) -> Result<VerificationReport> {
    Verifier::new().rogers_shephard(body)
}

pub fn check_godbersen(body: &VPolytope, k: usize) -> Result<VerificationReport> {
    Verifier::new().godbersen(body, k)
}

pub fn check_schneider(body: &VPolytope, p: usize) -> Result<VerificationReport> {
    Verifier::new().schneider(body, p)
}

pub fn check_conjecture1(body: &VPolytope, p: usize, k: usize) -> Result<VerificationReport> {
    Verifier::new().conjecture1(body, p, k)
}

pub fn check_conjecture2(body: &VPolytope, p: usize, kvec: &[usize]) -> Result<VerificationReport> {
    Verifier::new().conjecture2(body, p, kvec)
}

pub fn check_conjecture2_reduction(body: &VPolytope, p: usize, kvec: &[usize]) -> Result<VerificationReport> {
    Verifier::new().conjecture2_reduction(body, p, kvec)
}

pub fn check_dual_bt(body: &VPolytope, cover: &UniformCover) -> Result<VerificationReport> {
    Verifier::new().dual_bt(body, cover)
}

pub fn check_decomposition(body: &VPolytope, ls: &[VPolytope]) -> Result<VerificationReport> {
    Verifier::new().decomposition(body, ls)
}

pub fn per_cover_closed_form(body: &VPolytope, p: usize, kvec: &[usize], cover: &UniformCover) -> Result<Rational> {
    Verifier::new().per_cover_closed_form(body, p, kvec, cover)
}

pub fn alesker_coefficient(body: &VPolytope, p: usize, partition: &[usize]) -> Result<VerificationReport> {
    Verifier::new().alesker_coefficient(body, p, partition)
}
