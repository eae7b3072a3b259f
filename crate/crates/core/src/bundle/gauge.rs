//! Spanning-tree gauge fixing: parallel frames along a BFS tree, and
//! comparison of the remaining non-tree link holonomies.

use super::{DiscreteBundle, Frame};
use crate::confspace::DiscretePath;
use crate::error::{Error, Result};
use crate::graph::SpanningTree;
use crate::linalg::{cis, diff_norm, eigh, polar_unitary, CMat, C64};

/// Tolerance below which a cycle holonomy counts as the identity.
pub const TRIVIAL_HOLONOMY_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub enum Trivialization {
    /// A parallel frame over every vertex.
    Frame(Frame),
    /// A fundamental cycle at the tree root whose holonomy is not the identity.
    Obstructed { loop_path: DiscretePath, holonomy: CMat, deviation: f64 },
}

impl Trivialization {
    pub fn is_trivial(&self) -> bool {
        matches!(self, Trivialization::Frame(_))
    }

    pub fn into_frame(self) -> Result<Frame> {
        match self {
            Trivialization::Frame(f) => Ok(f),
            Trivialization::Obstructed { deviation, .. } => Err(Error::Obstructed { deviation }),
        }
    }
}

/// Frames obtained by transporting the identity out from `tree.root`.
fn tree_frames(bundle: &DiscreteBundle, tree: &SpanningTree, frames: &mut [CMat]) {
    let r = bundle.rank();
    frames[tree.root] = CMat::identity(r, r);
    for &v in &tree.order[1..] {
        let d = tree.parent[v].unwrap();
        let tail = bundle.graph().tail(d);
        frames[v] = bundle.transport(d) * &frames[tail];
    }
}

fn fundamental_loop(bundle: &DiscreteBundle, tree: &SpanningTree, edge: usize) -> DiscretePath {
    let g = bundle.graph();
    let [a, b] = g.edges()[edge];
    let mut walk = tree.path_from_root(g, a).unwrap();
    let mut back = tree.path_from_root(g, b).unwrap();
    back.reverse();
    walk.extend(back);
    DiscretePath(walk)
}

/// Parallel frame of a flat bundle with trivial holonomy, or the fundamental
/// loop that obstructs one. The frame is the identity at vertex 0.
pub fn trivialize(bundle: &DiscreteBundle) -> Result<Trivialization> {
    trivialize_at(bundle, 0)
}

/// [`trivialize`] with the identity placed at `root` instead.
pub fn trivialize_at(bundle: &DiscreteBundle, root: usize) -> Result<Trivialization> {
    let g = bundle.graph();
    let components = g.component_count();
    if components > 1 {
        return Err(Error::Disconnected { components });
    }
    let r = bundle.rank();
    if g.n_vertices() == 0 {
        return Ok(Trivialization::Frame(Frame { matrices: Vec::new() }));
    }
    if root >= g.n_vertices() {
        return Err(Error::InvalidConfig(format!("root {root} is not a vertex")));
    }
    let tree = g.spanning_tree(root);
    let mut frames = vec![CMat::identity(r, r); g.n_vertices()];
    tree_frames(bundle, &tree, &mut frames);

    let mut worst: Option<(usize, f64)> = None;
    for (e, &[a, b]) in g.edges().iter().enumerate() {
        if tree.in_tree[e] {
            continue;
        }
        let res = diff_norm(&frames[b], &(&bundle.links()[e] * &frames[a]));
        if res > TRIVIAL_HOLONOMY_TOL && worst.is_none_or(|(_, w)| res > w) {
            worst = Some((e, res));
        }
    }
    match worst {
        None => Ok(Trivialization::Frame(Frame { matrices: frames })),
        Some((e, _)) => {
            let loop_path = fundamental_loop(bundle, &tree, e);
            let holonomy = bundle.holonomy(&loop_path)?;
            let deviation = diff_norm(&holonomy, &CMat::identity(r, r));
            Ok(Trivialization::Obstructed { loop_path, holonomy, deviation })
        }
    }
}

/// Outcome of comparing two bundles on the same graph.
#[derive(Debug, Clone)]
pub struct GaugeComparison {
    pub equivalent: bool,
    /// Vertex isomorphisms `g_v` with `U2_e = g(head) U1_e g(tail)⁻¹`, when equivalent.
    pub witness: Option<Vec<CMat>>,
    /// Worst mismatch of conjugated fundamental-cycle holonomies.
    pub cycle_residual: f64,
    /// Worst mismatch of the witness on edges (infinite when there is no witness).
    pub edge_residual: f64,
    pub fundamental_cycles: usize,
}

/// [`gauge_equivalence`] at the default tolerance `1e-10`.
pub fn is_gauge_equivalent(b1: &DiscreteBundle, b2: &DiscreteBundle) -> Result<GaugeComparison> {
    gauge_equivalence(b1, b2, TRIVIAL_HOLONOMY_TOL)
}

/// Decides whether two bundles differ only by a change of fiber frames.
///
/// Both are gauge-fixed on the same BFS forest, which turns each non-tree
/// link into the holonomy of its fundamental cycle. Per component the two
/// families must then be simultaneously conjugate by one unitary `V`; for
/// rank 1 that means equal phases, otherwise `V` is taken from the common
/// null space of `X ↦ X h1 − h2 X`.
pub fn gauge_equivalence(b1: &DiscreteBundle, b2: &DiscreteBundle, tol: f64) -> Result<GaugeComparison> {
    if !b1.same_graph(b2.graph()) {
        return Err(Error::Shape("bundles live on different graphs".into()));
    }
    if b1.rank() != b2.rank() {
        return Err(Error::Shape(format!("ranks differ: {} vs {}", b1.rank(), b2.rank())));
    }
    let g = b1.graph();
    let r = b1.rank();
    let labels = g.components();
    let n_comp = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut roots = vec![usize::MAX; n_comp];
    for (v, &c) in labels.iter().enumerate() {
        if roots[c] == usize::MAX {
            roots[c] = v;
        }
    }

    let mut f1 = vec![CMat::identity(r, r); g.n_vertices()];
    let mut f2 = f1.clone();
    let mut in_tree = vec![false; g.n_edges()];
    for &root in &roots {
        let tree = g.spanning_tree(root);
        tree_frames(b1, &tree, &mut f1);
        tree_frames(b2, &tree, &mut f2);
        for (e, t) in tree.in_tree.iter().enumerate() {
            in_tree[e] |= *t;
        }
    }

    // gauge-fixed non-tree links, grouped by component
    let mut cycles: Vec<Vec<(CMat, CMat)>> = vec![Vec::new(); n_comp];
    for (e, &[a, b]) in g.edges().iter().enumerate() {
        if in_tree[e] {
            continue;
        }
        let h1 = f1[b].adjoint() * &b1.links()[e] * &f1[a];
        let h2 = f2[b].adjoint() * &b2.links()[e] * &f2[a];
        cycles[labels[a]].push((h1, h2));
    }
    let fundamental_cycles = cycles.iter().map(Vec::len).sum();

    let mut cycle_residual = 0.0f64;
    let mut conjugators = Vec::with_capacity(n_comp);
    for comp in &cycles {
        let v = if r == 1 { CMat::identity(1, 1) } else { intertwiner(comp, r) };
        for (h1, h2) in comp {
            cycle_residual = cycle_residual.max(diff_norm(&(&v * h1 * v.adjoint()), h2));
        }
        conjugators.push(v);
    }
    if cycle_residual > tol {
        return Ok(GaugeComparison {
            equivalent: false,
            witness: None,
            cycle_residual,
            edge_residual: f64::INFINITY,
            fundamental_cycles,
        });
    }
    let witness: Vec<CMat> =
        (0..g.n_vertices()).map(|v| &f2[v] * &conjugators[labels[v]] * f1[v].adjoint()).collect();
    let edge_residual = g
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &[a, b])| diff_norm(&(&witness[b] * &b1.links()[e] * witness[a].adjoint()), &b2.links()[e]))
        .fold(0.0, f64::max);
    Ok(GaugeComparison {
        equivalent: edge_residual <= tol,
        witness: Some(witness),
        cycle_residual,
        edge_residual,
        fundamental_cycles,
    })
}

/// A unitary `V` with `V h1 ≈ h2 V` for every pair, as close as the data allow.
fn intertwiner(pairs: &[(CMat, CMat)], r: usize) -> CMat {
    if pairs.is_empty() {
        return CMat::identity(r, r);
    }
    let id = CMat::identity(r, r);
    let mut m = CMat::zeros(r * r, r * r);
    for (h1, h2) in pairs {
        let k = h1.transpose().kronecker(&id) - id.kronecker(h2);
        m += k.adjoint() * k;
    }
    let (vals, vecs) = eigh(&m);
    let scale = pairs.len() as f64;
    let null: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] <= 1e-10 * scale).collect();
    let picks = if null.is_empty() { vec![0] } else { null };
    let mut x = CMat::zeros(r, r);
    for (n, &i) in picks.iter().enumerate() {
        // fixed generic coefficients so that the combination is invertible
        let c: C64 = cis(0.7 * n as f64 + 0.3) * (1.0 + 0.13 * n as f64);
        for col in 0..r {
            for row in 0..r {
                x[(row, col)] += c * vecs[(col * r + row, i)];
            }
        }
    }
    polar_unitary(&x)
}
