//! Viewport/animation perturbations and weighting-profile robustness.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::archetype::{ArchetypeKind, CorpusItem};
use crate::detector::Detector;
use crate::error::AuditError;
use crate::scoring::{compute_components, compute_psi, PsiComponents, WeightProfile};
use crate::snapshot::Snapshot;
use crate::state::Policy;
use crate::stats::median;
use crate::traversal::{Budget, Engine};

/// Scales the viewport height (and the surface's own viewport, if any),
/// rounding to whole pixels. Node geometry is untouched.
pub fn perturb_viewport(snapshot: &Snapshot, factor: f64) -> Result<Snapshot, AuditError> {
    if !(factor > 0.0 && factor.is_finite()) {
        return Err(AuditError::InvalidParams(format!("viewport factor must be positive, got {factor}")));
    }
    let mut s = snapshot.clone();
    if factor == 1.0 {
        return Ok(s);
    }
    s.viewport.height = (f64::from(s.viewport.height) * factor).round().max(1.0) as u32;
    s.viewport.name = None;
    if let Some(evh) = s.surface.effective_viewport_height {
        s.surface.effective_viewport_height = Some((evh * factor).round().max(1.0));
    }
    let evh = crate::snapshot::effective_viewport_height(&s);
    if s.surface.scroll_height < evh {
        s.surface.scroll_height = evh;
    }
    Ok(s)
}

/// Adds `delta_ms` to every gating interactive node.
pub fn perturb_animation(snapshot: &Snapshot, delta_ms: u32) -> Snapshot {
    let mut s = snapshot.clone();
    if delta_ms == 0 {
        return s;
    }
    for n in &mut s.nodes {
        if n.is_interactive() && n.is_gating() {
            n.animation_ms += delta_ms;
        }
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PerturbationSpec {
    pub viewport_factors: Vec<f64>,
    pub animation_deltas_ms: Vec<u32>,
}

impl Default for PerturbationSpec {
    fn default() -> Self {
        PerturbationSpec {
            viewport_factors: vec![0.8, 1.0, 1.2],
            animation_deltas_ms: vec![0, 100, 200],
        }
    }
}

impl PerturbationSpec {
    /// One-factor-at-a-time grid of `(viewport factor, delta ms)` conditions.
    pub fn conditions(&self) -> Vec<(f64, u32)> {
        let mut out: Vec<(f64, u32)> = self.viewport_factors.iter().map(|f| (*f, 0)).collect();
        for d in &self.animation_deltas_ms {
            if *d != 0 {
                out.push((1.0, *d));
            }
        }
        if !out.contains(&(1.0, 0)) {
            out.insert(0, (1.0, 0));
        }
        out
    }
}

/// PSI of one snapshot under one perturbation condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PerturbationRow {
    pub kind: ArchetypeKind,
    pub viewport_factor: f64,
    pub delta_ms: u32,
    pub components: PsiComponents,
    pub psi: f64,
}

/// Re-audits each snapshot under every condition of the grid.
pub fn perturbation_table(
    snapshots: &[(ArchetypeKind, Snapshot)],
    spec: &PerturbationSpec,
    profile: &WeightProfile,
    policy: Policy,
    detector: &Detector,
    budget: Budget,
) -> Result<Vec<PerturbationRow>, AuditError> {
    if spec.viewport_factors.iter().any(|f| !(*f > 0.0 && f.is_finite())) {
        return Err(AuditError::InvalidParams("viewport factors must be positive".into()));
    }
    let engine = Engine {
        budget,
        ..Engine::new(detector)
    };
    let mut out = Vec::new();
    for (kind, snapshot) in snapshots {
        for (factor, delta) in spec.conditions() {
            let s = perturb_animation(&perturb_viewport(snapshot, factor)?, delta);
            let trace = engine.traverse(&s, policy)?;
            let components = compute_components(&trace, &s, detector)?;
            out.push(PerturbationRow {
                kind: *kind,
                viewport_factor: factor,
                delta_ms: delta,
                psi: compute_psi(&components, profile),
                components,
            });
        }
    }
    Ok(out)
}

/// Calibrated canonical snapshot of every archetype.
pub fn canonical_snapshots(seed: u64) -> Result<Vec<(ArchetypeKind, Snapshot)>, AuditError> {
    crate::archetype::canonical_calibration()
        .into_iter()
        .map(|(k, params)| Ok((k, crate::archetype::generate_archetype(k, &params, seed)?)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ProfileSample {
    pub profiles: Vec<WeightProfile>,
    pub constrained: bool,
    pub seed: u64,
    pub concentration: f64,
}

/// `n` symmetric Dirichlet draws scaled to sum to 4. Constrained sampling
/// rejects draws with any weight above 2.
pub fn sample_weight_profiles(n: usize, seed: u64, constrained: bool, concentration: f64) -> Result<ProfileSample, AuditError> {
    if n == 0 {
        return Err(AuditError::InvalidParams("profile count must be positive".into()));
    }
    let gamma = Gamma::new(concentration, 1.0)
        .map_err(|_| AuditError::InvalidParams(format!("invalid concentration {concentration}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut profiles = Vec::with_capacity(n);
    while profiles.len() < n {
        let g: [f64; 4] = std::array::from_fn(|_| gamma.sample(&mut rng));
        let total: f64 = g.iter().sum();
        if !(total > 0.0) {
            continue;
        }
        let w = g.map(|x| 4.0 * x / total);
        if constrained && w.iter().any(|x| *x > 2.0) {
            continue;
        }
        profiles.push(WeightProfile {
            name: format!("dirichlet-{}", profiles.len()),
            alpha: w[0],
            beta: w[1],
            gamma: w[2],
            delta: w[3],
        });
    }
    Ok(ProfileSample {
        profiles,
        constrained,
        seed,
        concentration,
    })
}

/// Components of one corpus item under one policy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CorpusResult {
    pub item_id: String,
    pub kind: ArchetypeKind,
    pub breakpoint: String,
    pub policy: Policy,
    pub components: PsiComponents,
}

pub fn audit_corpus(items: &[CorpusItem], policies: &[Policy], detector: &Detector, budget: Budget) -> Result<Vec<CorpusResult>, AuditError> {
    let engine = Engine {
        budget,
        ..Engine::new(detector)
    };
    let mut out = Vec::with_capacity(items.len() * policies.len());
    for item in items {
        for &policy in policies {
            let trace = engine.traverse(&item.snapshot, policy)?;
            out.push(CorpusResult {
                item_id: item.provenance.item_id.clone(),
                kind: item.provenance.kind,
                breakpoint: item.provenance.breakpoint.clone(),
                policy,
                components: compute_components(&trace, &item.snapshot, detector)?,
            });
        }
    }
    Ok(out)
}

pub const CLAIMS: [&str; 5] = [
    "co-present lowest",
    "multi-step highest",
    "keyboard > pointer",
    "mobile > desktop",
    "scrollwall > accordion",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ClaimSupport {
    pub claim: String,
    /// Fraction of profiles supporting the claim; `None` when not evaluable.
    pub support: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RobustnessReport {
    pub claims: Vec<ClaimSupport>,
    pub profile_count: usize,
    pub seed: u64,
    pub constrained: bool,
}

impl RobustnessReport {
    pub fn support(&self, claim: &str) -> Option<f64> {
        self.claims.iter().find(|c| c.claim == claim).and_then(|c| c.support)
    }
}

fn group_median<F: Fn(&CorpusResult) -> bool>(results: &[CorpusResult], psi: &[f64], pick: F) -> Option<f64> {
    let v: Vec<f64> = results
        .iter()
        .zip(psi)
        .filter(|(r, _)| pick(r))
        .map(|(_, p)| *p)
        .collect();
    median(&v).ok()
}

/// Evaluates one claim on group medians; `None` when a needed group is empty.
fn evaluate(claim: &str, results: &[CorpusResult], psi: &[f64]) -> Option<bool> {
    let by_kind = |k: ArchetypeKind| group_median(results, psi, |r| r.kind == k);
    let kinds: Vec<ArchetypeKind> = ArchetypeKind::ALL
        .into_iter()
        .filter(|k| results.iter().any(|r| r.kind == *k))
        .collect();
    let extreme = |target: ArchetypeKind, lowest: bool| -> Option<bool> {
        let t = by_kind(target)?;
        let others: Vec<f64> = kinds.iter().filter(|k| **k != target).filter_map(|k| by_kind(*k)).collect();
        if others.is_empty() {
            return None;
        }
        Some(others.iter().all(|o| if lowest { t < *o } else { t > *o }))
    };
    match claim {
        "co-present lowest" => extreme(ArchetypeKind::CoPresent, true),
        "multi-step highest" => extreme(ArchetypeKind::MultiStep, false),
        "keyboard > pointer" => Some(
            group_median(results, psi, |r| r.policy == Policy::Keyboard)?
                > group_median(results, psi, |r| r.policy == Policy::Pointer)?,
        ),
        "mobile > desktop" => Some(
            group_median(results, psi, |r| r.breakpoint == "mobile")?
                > group_median(results, psi, |r| r.breakpoint == "desktop")?,
        ),
        "scrollwall > accordion" => Some(by_kind(ArchetypeKind::ScrollWall)? > by_kind(ArchetypeKind::Accordion)?),
        _ => None,
    }
}

/// Support fraction of each ordering claim across the sampled profiles,
/// recomputing PSI from stored components.
pub fn rank_stability(results: &[CorpusResult], sample: &ProfileSample) -> RobustnessReport {
    let mut hits = [0usize; CLAIMS.len()];
    let mut evaluable = [true; CLAIMS.len()];
    for profile in &sample.profiles {
        let psi: Vec<f64> = results.iter().map(|r| compute_psi(&r.components, profile)).collect();
        for (i, claim) in CLAIMS.iter().enumerate() {
            match evaluate(claim, results, &psi) {
                Some(true) => hits[i] += 1,
                Some(false) => {}
                None => evaluable[i] = false,
            }
        }
    }
    let n = sample.profiles.len();
    RobustnessReport {
        claims: CLAIMS
            .iter()
            .enumerate()
            .map(|(i, c)| ClaimSupport {
                claim: c.to_string(),
                support: (evaluable[i] && n > 0).then(|| hits[i] as f64 / n as f64),
            })
            .collect(),
        profile_count: n,
        seed: sample.seed,
        constrained: sample.constrained,
    }
}

/// Mean weighted component divided by mean PSI, per archetype, in
/// `[distance, time, loops, reveals]` order. `None` for groups whose mean PSI is zero.
pub fn component_shares(results: &[CorpusResult], profile: &WeightProfile) -> BTreeMap<ArchetypeKind, Option<[f64; 4]>> {
    let mut groups: BTreeMap<ArchetypeKind, Vec<&CorpusResult>> = BTreeMap::new();
    for r in results {
        groups.entry(r.kind).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|(kind, rs)| {
            let n = rs.len() as f64;
            let w = profile.weights();
            let means: [f64; 4] =
                std::array::from_fn(|j| rs.iter().map(|r| r.components.as_array()[j] * w[j]).sum::<f64>() / n);
            let total: f64 = means.iter().sum();
            let shares = (total > 0.0).then(|| means.map(|m| m / total));
            (kind, shares)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scoring::named_profile;

    fn result(kind: ArchetypeKind, policy: Policy, c: [f64; 4]) -> CorpusResult {
        CorpusResult {
            item_id: "x".into(),
            kind,
            breakpoint: "desktop".into(),
            policy,
            components: PsiComponents::new(c[0], c[1], c[2] as u32, c[3] as u32),
        }
    }

    #[test]
    fn dirichlet_draws_sum_to_four() {
        let s = sample_weight_profiles(200, 7, false, 1.0).unwrap();
        for p in &s.profiles {
            assert!((p.weights().iter().sum::<f64>() - 4.0).abs() < 1e-9);
            assert!(p.weights().iter().all(|w| *w >= 0.0));
        }
        let c = sample_weight_profiles(200, 7, true, 1.0).unwrap();
        assert!(c.profiles.iter().all(|p| p.weights().iter().all(|w| *w <= 2.0)));
        assert_eq!(s, sample_weight_profiles(200, 7, false, 1.0).unwrap());
        assert!(sample_weight_profiles(0, 7, false, 1.0).is_err());
        assert!(sample_weight_profiles(3, 7, false, 0.0).is_err());
    }

    #[test]
    fn identical_components_support_no_strict_order() {
        let rs: Vec<CorpusResult> = ArchetypeKind::ALL
            .into_iter()
            .flat_map(|k| Policy::ALL.map(|p| result(k, p, [1.0, 1.0, 0.0, 0.0])))
            .collect();
        let sample = sample_weight_profiles(20, 1, false, 1.0).unwrap();
        let rep = rank_stability(&rs, &sample);
        for claim in ["co-present lowest", "multi-step highest", "keyboard > pointer", "scrollwall > accordion"] {
            assert_eq!(rep.support(claim), Some(0.0), "{claim}");
        }
        assert_eq!(rep.support("mobile > desktop"), None);
    }

    #[test]
    fn shares_of_a_pure_distance_group() {
        let rs = vec![result(ArchetypeKind::ScrollWall, Policy::Pointer, [1.0, 0.0, 0.0, 0.0])];
        let shares = component_shares(&rs, &named_profile("default").unwrap());
        assert_eq!(shares[&ArchetypeKind::ScrollWall], Some([1.0, 0.0, 0.0, 0.0]));
        let zero = vec![result(ArchetypeKind::CoPresent, Policy::Pointer, [0.0; 4])];
        assert_eq!(component_shares(&zero, &named_profile("default").unwrap())[&ArchetypeKind::CoPresent], None);
    }

    #[test]
    fn grid_is_one_factor_at_a_time() {
        let g = PerturbationSpec::default().conditions();
        assert_eq!(g, vec![(0.8, 0), (1.0, 0), (1.2, 0), (1.0, 100), (1.0, 200)]);
    }
}
