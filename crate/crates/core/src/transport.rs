//! Exact free-space norm of finitely supported elements.
//!
//! The norm of `Σ c_p δ_p` is the optimal cost of moving the positive part
//! of `ν = c - (Σc) δ_base` onto its negative part with cost `d`. The plan
//! comes from successive shortest paths on the bipartite transport network;
//! the dual is a 1-Lipschitz function tight on every plan leg.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;
use crate::molecule::{to_point_masses, MoleculeSystem, PointMassElement};
use crate::norming::LipschitzFunction;
use crate::rational::{render, Rational};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PlanLeg {
    pub source: usize,
    pub sink: usize,
    pub mass: Rational,
}

/// Primal plan and dual function with equal value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransportCertificate {
    pub value: Rational,
    /// Sorted by `(source, sink)`.
    pub plan: Vec<PlanLeg>,
    pub dual: LipschitzFunction,
}

impl TransportCertificate {
    /// Re-check the certificate against raw data: the plan moves exactly the
    /// balanced measure, costs `value`, and the dual is 1-Lipschitz,
    /// vanishes at the base and pairs with the element to `value`.
    pub fn verify(
        &self,
        space: &FiniteMetricSpace,
        element: &PointMassElement,
    ) -> std::result::Result<(), String> {
        let n = space.len();
        let mut net = vec![Rational::zero(); n];
        let mut cost = Rational::zero();
        for (i, leg) in self.plan.iter().enumerate() {
            if leg.source >= n || leg.sink >= n || leg.source == leg.sink {
                return Err(format!("plan leg {} has bad endpoints", i + 1));
            }
            if !leg.mass.is_positive() {
                return Err(format!("plan leg {} has nonpositive mass", i + 1));
            }
            net[leg.source] += &leg.mass;
            net[leg.sink] -= &leg.mass;
            cost += &leg.mass * space.d(leg.source, leg.sink);
        }
        if self
            .plan
            .windows(2)
            .any(|w| (w[0].source, w[0].sink) >= (w[1].source, w[1].sink))
        {
            return Err("plan is not sorted by (source, sink)".into());
        }
        let target = element.balanced_measure(space);
        if net != target {
            return Err("plan does not balance the element".into());
        }
        if cost != self.value {
            return Err(format!(
                "plan costs {} but the value is {}",
                render(&cost),
                render(&self.value)
            ));
        }
        if !self.dual.verify(space) {
            return Err("dual Lipschitz constant or base value is wrong".into());
        }
        if self.dual.lip() > &Rational::one() {
            return Err(format!(
                "dual has Lipschitz constant {}",
                render(self.dual.lip())
            ));
        }
        let objective = self.dual.evaluate(element);
        if objective != self.value {
            return Err(format!(
                "dual objective {} differs from the value {}",
                render(&objective),
                render(&self.value)
            ));
        }
        Ok(())
    }
}

/// Minimum-cost flow from `supply` points to `demand` points with cost `d`.
/// Returns the flow matrix indexed `[source slot][sink slot]`.
fn min_cost_flow(
    space: &FiniteMetricSpace,
    sources: &[(usize, Rational)],
    sinks: &[(usize, Rational)],
) -> Vec<Vec<Rational>> {
    let (ns, nt) = (sources.len(), sinks.len());
    // node layout: 0 = super source, 1..=ns sources, then sinks, then T
    let nodes = ns + nt + 2;
    let t_node = nodes - 1;
    let sink_node = |j: usize| 1 + ns + j;
    let cost = |i: usize, j: usize| space.d(sources[i].0, sinks[j].0).clone();

    let mut flow = vec![vec![Rational::zero(); nt]; ns];
    let mut sent: Vec<Rational> = vec![Rational::zero(); ns];
    let mut received: Vec<Rational> = vec![Rational::zero(); nt];
    let mut potential = vec![Rational::zero(); nodes];

    // Residual arcs out of `u` as (target, cost, capacity or None for infinite).
    let arcs = |u: usize,
                flow: &Vec<Vec<Rational>>,
                sent: &Vec<Rational>,
                received: &Vec<Rational>|
     -> Vec<(usize, Rational, Option<Rational>)> {
        let mut out = Vec::new();
        if u == 0 {
            for i in 0..ns {
                let cap = &sources[i].1 - &sent[i];
                if cap.is_positive() {
                    out.push((1 + i, Rational::zero(), Some(cap)));
                }
            }
        } else if u <= ns {
            let i = u - 1;
            for j in 0..nt {
                out.push((sink_node(j), cost(i, j), None));
            }
        } else if u < t_node {
            let j = u - 1 - ns;
            for i in 0..ns {
                if flow[i][j].is_positive() {
                    out.push((1 + i, -cost(i, j), Some(flow[i][j].clone())));
                }
            }
            let cap = &sinks[j].1 - &received[j];
            if cap.is_positive() {
                out.push((t_node, Rational::zero(), Some(cap)));
            }
        }
        out
    };

    loop {
        if sent.iter().zip(sources).all(|(s, (_, m))| s == m) {
            break;
        }
        // Dijkstra on reduced costs, dense selection, ties to the smaller node.
        let mut dist: Vec<Option<Rational>> = vec![None; nodes];
        let mut pred: Vec<Option<(usize, Option<Rational>)>> = vec![None; nodes];
        let mut done = vec![false; nodes];
        dist[0] = Some(Rational::zero());
        loop {
            let mut pick: Option<usize> = None;
            for v in 0..nodes {
                if done[v] {
                    continue;
                }
                if let Some(dv) = &dist[v] {
                    if pick.is_none_or(|p| dv < dist[p].as_ref().unwrap()) {
                        pick = Some(v);
                    }
                }
            }
            let Some(u) = pick else { break };
            done[u] = true;
            let du = dist[u].clone().unwrap();
            for (v, c, cap) in arcs(u, &flow, &sent, &received) {
                let reduced = c + &potential[u] - &potential[v];
                debug_assert!(!reduced.is_negative(), "negative reduced cost");
                let cand = &du + reduced;
                if dist[v].as_ref().is_none_or(|dv| &cand < dv) {
                    dist[v] = Some(cand);
                    pred[v] = Some((u, cap));
                }
            }
        }
        assert!(dist[t_node].is_some(), "sink side unreachable");
        let max_dist = dist.iter().flatten().max().cloned().unwrap();
        for v in 0..nodes {
            potential[v] += dist[v].as_ref().unwrap_or(&max_dist);
        }

        // Bottleneck along the path.
        let mut bottleneck: Option<Rational> = None;
        let mut v = t_node;
        while v != 0 {
            let (u, cap) = pred[v].clone().unwrap();
            if let Some(c) = cap {
                if bottleneck.as_ref().is_none_or(|b| &c < b) {
                    bottleneck = Some(c);
                }
            }
            v = u;
        }
        let amount = bottleneck.expect("augmenting path has a finite arc");
        let mut v = t_node;
        while v != 0 {
            let (u, _) = pred[v].clone().unwrap();
            if u == 0 {
                sent[v - 1] += &amount;
            } else if v == t_node {
                received[u - 1 - ns] += &amount;
            } else if u <= ns {
                flow[u - 1][v - 1 - ns] += &amount;
            } else {
                flow[v - 1][u - 1 - ns] -= &amount;
            }
            v = u;
        }
    }
    flow
}

/// A 1-Lipschitz function, zero at the base, with `f(s) - f(t) = d(s, t)`
/// on every plan leg. Shortest paths on the support with negative reverse
/// arcs for the legs, then the largest extension to all points.
fn dual_function(space: &FiniteMetricSpace, support: &[usize], plan: &[PlanLeg]) -> Vec<Rational> {
    let k = support.len();
    let slot = |p: usize| support.iter().position(|&q| q == p).unwrap();
    // constraint f(v) <= f(u) + w  is an arc u -> v of weight w
    let mut edges: Vec<(usize, usize, Rational)> = Vec::new();
    for a in 0..k {
        for b in 0..k {
            if a != b {
                edges.push((a, b, space.d(support[a], support[b]).clone()));
            }
        }
    }
    for leg in plan {
        edges.push((
            slot(leg.source),
            slot(leg.sink),
            -space.d(leg.source, leg.sink).clone(),
        ));
    }
    let mut pi = vec![Rational::zero(); k];
    for round in 0..=k {
        let mut changed = false;
        for (u, v, w) in &edges {
            let cand = &pi[*u] + w;
            if cand < pi[*v] {
                pi[*v] = cand;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        assert!(
            round < k,
            "optimal plan produced a negative cycle in the dual graph"
        );
    }
    let shift = pi[slot(space.base())].clone();
    (0..space.len())
        .map(|x| {
            (0..k)
                .map(|a| &pi[a] + space.d(support[a], x))
                .min()
                .unwrap()
                - &shift
        })
        .collect()
}

/// Exact norm of `element` with a transport certificate.
pub fn free_norm(space: &FiniteMetricSpace, element: &PointMassElement) -> TransportCertificate {
    let measure = element.balanced_measure(space);
    let sources: Vec<(usize, Rational)> = measure
        .iter()
        .enumerate()
        .filter(|(_, m)| m.is_positive())
        .map(|(p, m)| (p, m.clone()))
        .collect();
    let sinks: Vec<(usize, Rational)> = measure
        .iter()
        .enumerate()
        .filter(|(_, m)| m.is_negative())
        .map(|(p, m)| (p, -m.clone()))
        .collect();
    if sources.is_empty() {
        return TransportCertificate {
            value: Rational::zero(),
            plan: Vec::new(),
            dual: LipschitzFunction::zero(space),
        };
    }
    let flow = min_cost_flow(space, &sources, &sinks);
    let mut plan = Vec::new();
    for (i, row) in flow.iter().enumerate() {
        for (j, m) in row.iter().enumerate() {
            if m.is_positive() {
                plan.push(PlanLeg {
                    source: sources[i].0,
                    sink: sinks[j].0,
                    mass: m.clone(),
                });
            }
        }
    }
    plan.sort();
    let value = plan
        .iter()
        .map(|l| &l.mass * space.d(l.source, l.sink))
        .sum();
    let mut support: Vec<usize> = sources.iter().chain(&sinks).map(|(p, _)| *p).collect();
    support.push(space.base());
    support.sort_unstable();
    support.dedup();
    let dual_values = dual_function(space, &support, &plan);
    let dual = LipschitzFunction::new(space, dual_values).expect("dual vanishes at the base");
    TransportCertificate { value, plan, dual }
}

/// [`free_norm`] followed by self-verification.
pub fn free_norm_checked(
    space: &FiniteMetricSpace,
    element: &PointMassElement,
) -> Result<TransportCertificate> {
    let cert = free_norm(space, element);
    cert.verify(space, element).map_err(Error::Certificate)?;
    Ok(cert)
}

/// Does `‖Σ λ_i m(x_i, y_i)‖ = Σ λ_i`?
pub fn attains(space: &FiniteMetricSpace, system: &MoleculeSystem) -> bool {
    let element = to_point_masses(space, system);
    free_norm(space, &element).value == system.total_weight()
}

/// Pairs and weights read off an optimal plan: `λ = mass · d(source, sink)`.
/// The weights sum to the norm and the pairs are cyclically monotone.
pub fn decompose_to_molecules(
    space: &FiniteMetricSpace,
    element: &PointMassElement,
) -> MoleculeSystem {
    let cert = free_norm(space, element);
    let pairs = cert.plan.iter().map(|l| (l.source, l.sink)).collect();
    let weights = cert
        .plan
        .iter()
        .map(|l| &l.mass * space.d(l.source, l.sink))
        .collect();
    MoleculeSystem::new(space, pairs, weights).expect("plan legs form a valid system")
}
