//! Finite stand-ins for the ordered and unordered configuration spaces of
//! `N` particles: lattice graphs of collision-free tuples, their quotient by
//! `S_N`, the covering projection between them, and path lifting.

use std::collections::HashMap;
use std::sync::Arc;
use std::fmt::Write as _;

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DirEdge, Graph};
use crate::perm::{factorial, Permutation};

/// A rectangular lattice of `sides[0] × … × sides[d-1]` sites.
///
/// Site indices are row-major with the first axis most significant, so
/// ordering sites by index is the lexicographic order of their coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeBox {
    sides: Vec<usize>,
    periodic: Vec<bool>,
    spacing: f64,
}

impl LatticeBox {
    pub fn new(sides: Vec<usize>, periodic: Vec<bool>, spacing: f64) -> Result<Self> {
        if sides.is_empty() {
            return Err(Error::InvalidBox("dimension must be at least 1".into()));
        }
        if sides.contains(&0) {
            return Err(Error::InvalidBox(format!("side lengths must be positive: {sides:?}")));
        }
        if periodic.len() != sides.len() {
            return Err(Error::InvalidBox(format!(
                "{} periodicity flags for {} axes",
                periodic.len(),
                sides.len()
            )));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::InvalidBox(format!("spacing must be positive, got {spacing}")));
        }
        Ok(Self { sides, periodic, spacing })
    }

    /// Non-periodic box with unit spacing.
    pub fn open(sides: &[usize]) -> Result<Self> {
        Self::new(sides.to_vec(), vec![false; sides.len()], 1.0)
    }

    pub fn with_spacing(mut self, spacing: f64) -> Result<Self> {
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::InvalidBox(format!("spacing must be positive, got {spacing}")));
        }
        self.spacing = spacing;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    pub fn sides(&self) -> &[usize] {
        &self.sides
    }

    pub fn periodic(&self) -> &[bool] {
        &self.periodic
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic.iter().any(|&p| p)
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn site_count(&self) -> usize {
        self.sides.iter().product()
    }

    pub fn coords(&self, site: usize) -> Vec<i64> {
        let mut c = vec![0i64; self.dim()];
        let mut rest = site;
        for axis in (0..self.dim()).rev() {
            c[axis] = (rest % self.sides[axis]) as i64;
            rest /= self.sides[axis];
        }
        c
    }

    pub fn site_at(&self, coords: &[i64]) -> Option<usize> {
        if coords.len() != self.dim() {
            return None;
        }
        let mut idx = 0usize;
        for (axis, &c) in coords.iter().enumerate() {
            let side = self.sides[axis] as i64;
            if c < 0 || c >= side {
                return None;
            }
            idx = idx * self.sides[axis] + c as usize;
        }
        Some(idx)
    }

    /// Physical position `coords · spacing`.
    pub fn position(&self, site: usize) -> Vec<f64> {
        self.coords(site).into_iter().map(|c| c as f64 * self.spacing).collect()
    }

    /// Sites one axis-aligned unit step away, sorted and without repeats.
    pub fn neighbors(&self, site: usize) -> Vec<usize> {
        let base = self.coords(site);
        let mut out = Vec::with_capacity(2 * self.dim());
        for axis in 0..self.dim() {
            let side = self.sides[axis] as i64;
            for step in [-1i64, 1] {
                let mut c = base.clone();
                c[axis] += step;
                if self.periodic[axis] {
                    c[axis] = c[axis].rem_euclid(side);
                }
                if let Some(n) = self.site_at(&c) {
                    if n != site {
                        out.push(n);
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Volume element of one lattice cell of `n` particles: `spacing^(n·d)`.
    pub fn cell_volume(&self, particles: usize) -> f64 {
        self.spacing.powi((particles * self.dim()) as i32)
    }

    pub fn format_site(&self, site: usize) -> String {
        let c = self.coords(site);
        let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

/// A tuple of lattice sites, one per particle label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrderedConfig(pub Vec<usize>);

/// A set of distinct lattice sites, stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct UnorderedConfig(Vec<usize>);

impl UnorderedConfig {
    pub fn sites(&self) -> &[usize] {
        &self.0
    }

    /// The sorted tuple, i.e. the canonical ordered representative.
    pub fn canonical(&self) -> OrderedConfig {
        OrderedConfig(self.0.clone())
    }
}

/// `π`: forgets the particle labels.
pub fn project(config: &OrderedConfig) -> Result<UnorderedConfig> {
    let mut sites = config.0.clone();
    sites.sort_unstable();
    if sites.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidConfig(format!("collision in {:?}", config.0)));
    }
    Ok(UnorderedConfig(sites))
}

impl OrderedConfig {
    /// `(σ·x)_k = x_{σ(k)}`.
    pub fn permuted(&self, sigma: &Permutation) -> Self {
        Self(sigma.permute_entries(&self.0))
    }
}

/// Vertex sequence in a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscretePath(pub Vec<usize>);

impl DiscretePath {
    pub fn constant(v: usize) -> Self {
        Self(vec![v])
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn start(&self) -> usize {
        self.0[0]
    }

    pub fn end(&self) -> usize {
        *self.0.last().unwrap()
    }

    pub fn is_loop(&self) -> bool {
        !self.0.is_empty() && self.start() == self.end()
    }

    pub fn reversed(&self) -> Self {
        let mut v = self.0.clone();
        v.reverse();
        Self(v)
    }

    /// `self` followed by `other`; requires `self.end() == other.start()`.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if self.end() != other.start() {
            return Err(Error::InvalidPath(format!(
                "cannot join path ending at {} with path starting at {}",
                self.end(),
                other.start()
            )));
        }
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0[1..]);
        Ok(Self(v))
    }

    /// Consecutive vertices are adjacent in `graph`.
    pub fn validate(&self, graph: &Graph) -> Result<()> {
        if self.0.is_empty() {
            return Err(Error::InvalidPath("empty path".into()));
        }
        for &v in &self.0 {
            if v >= graph.n_vertices() {
                return Err(Error::InvalidPath(format!("vertex {v} not in graph")));
            }
        }
        for w in self.0.windows(2) {
            if graph.dir_edge(w[0], w[1]).is_none() {
                return Err(Error::InvalidPath(format!("vertices {} and {} are not adjacent", w[0], w[1])));
            }
        }
        Ok(())
    }

    pub fn dir_edges(&self, graph: &Graph) -> Result<Vec<DirEdge>> {
        self.validate(graph)?;
        Ok(self.0.windows(2).map(|w| graph.dir_edge(w[0], w[1]).unwrap()).collect())
    }
}

/// The graph of ordered `N`-tuples of lattice sites; adjacent tuples differ by
/// one particle moved one lattice step.
#[derive(Debug, Clone)]
pub struct ConfigGraph {
    lattice: LatticeBox,
    particles: usize,
    collisions: bool,
    tuples: Vec<usize>,
    index: HashMap<Vec<usize>, usize>,
    graph: Arc<Graph>,
}

impl ConfigGraph {
    pub fn lattice(&self) -> &LatticeBox {
        &self.lattice
    }

    pub fn particles(&self) -> usize {
        self.particles
    }

    pub fn allows_collisions(&self) -> bool {
        self.collisions
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn shared_graph(&self) -> Arc<Graph> {
        Arc::clone(&self.graph)
    }

    pub fn n_vertices(&self) -> usize {
        self.graph.n_vertices()
    }

    pub fn tuple(&self, v: usize) -> &[usize] {
        &self.tuples[v * self.particles..(v + 1) * self.particles]
    }

    pub fn config(&self, v: usize) -> OrderedConfig {
        OrderedConfig(self.tuple(v).to_vec())
    }

    pub fn vertex_of(&self, tuple: &[usize]) -> Option<usize> {
        self.index.get(tuple).copied()
    }

    /// Vertex of `σ·tuple(v)`.
    pub fn permuted_vertex(&self, v: usize, sigma: &Permutation) -> usize {
        let t = sigma.permute_entries(self.tuple(v));
        self.index[&t]
    }

    /// Particle positions flattened to `N·d` reals.
    pub fn positions(&self, v: usize) -> Vec<f64> {
        self.tuple(v).iter().flat_map(|&s| self.lattice.position(s)).collect()
    }
}

/// Builds the graph of collision-free ordered tuples. `N = 0` yields a single
/// point (the empty configuration).
pub fn build_ordered_graph(lattice: &LatticeBox, particles: usize) -> Result<ConfigGraph> {
    build_ordered(lattice, particles, false)
}

/// Like [`build_ordered_graph`] but keeps tuples with coinciding sites, and
/// lets particles hop onto occupied sites.
pub fn build_ordered_graph_with_collisions(lattice: &LatticeBox, particles: usize) -> Result<ConfigGraph> {
    build_ordered(lattice, particles, true)
}

fn build_ordered(lattice: &LatticeBox, particles: usize, collisions: bool) -> Result<ConfigGraph> {
    let sites = lattice.site_count();
    if !collisions && particles > sites {
        return Err(Error::Capacity { sites, particles });
    }
    let neighbor_table: Vec<Vec<usize>> = (0..sites).map(|s| lattice.neighbors(s)).collect();

    // odometer over site tuples in lexicographic order
    let mut tuples = Vec::new();
    let mut current = vec![0usize; particles];
    'outer: loop {
        let distinct = collisions || {
            let mut seen = current.clone();
            seen.sort_unstable();
            seen.windows(2).all(|w| w[0] != w[1])
        };
        if distinct {
            tuples.extend_from_slice(&current);
        }
        let mut pos = particles;
        loop {
            if pos == 0 {
                break 'outer;
            }
            pos -= 1;
            current[pos] += 1;
            if current[pos] < sites {
                break;
            }
            current[pos] = 0;
        }
    }
    let n_vertices = if particles == 0 { 1 } else { tuples.len() / particles };
    let mut index = HashMap::with_capacity(n_vertices);
    for v in 0..n_vertices {
        index.insert(tuples[v * particles..(v + 1) * particles].to_vec(), v);
    }

    let mut edges = Vec::new();
    let mut scratch = vec![0usize; particles];
    for v in 0..n_vertices {
        let t = &tuples[v * particles..(v + 1) * particles];
        for k in 0..particles {
            for &nb in &neighbor_table[t[k]] {
                if !collisions && t.contains(&nb) {
                    continue;
                }
                scratch.copy_from_slice(t);
                scratch[k] = nb;
                let w = index[&scratch];
                if v < w {
                    edges.push([v, w]);
                }
            }
        }
    }
    Ok(ConfigGraph {
        lattice: lattice.clone(),
        particles,
        collisions,
        tuples,
        index,
        graph: Arc::new(Graph::new(n_vertices, edges)),
    })
}

/// Ordered graph, its `S_N` quotient, and the covering projection with lift tables.
#[derive(Debug, Clone)]
pub struct ConfigGraphPair {
    ordered: ConfigGraph,
    quotient_tuples: Vec<usize>,
    quotient_index: HashMap<Vec<usize>, usize>,
    quotient: Arc<Graph>,
    projection: Vec<usize>,
    preimages: Vec<Vec<usize>>,
    canonical: Vec<usize>,
    /// Aligning permutation of each quotient edge, forward direction.
    alignments: Vec<Permutation>,
    /// `(vacated site, newly occupied site)` of each quotient edge, forward direction.
    moves: Vec<(usize, usize)>,
}

/// Quotients a collision-free ordered graph by the relabeling action of `S_N`.
pub fn build_quotient(ordered: ConfigGraph) -> Result<ConfigGraphPair> {
    if ordered.collisions {
        return Err(Error::Shape(
            "S_N does not act freely on graphs that retain collision tuples".into(),
        ));
    }
    let n = ordered.particles;
    let n_fact = factorial(n);

    let mut quotient_tuples = Vec::new();
    let mut quotient_index = HashMap::new();
    let mut canonical = Vec::new();
    for v in 0..ordered.n_vertices() {
        let t = ordered.tuple(v);
        if t.windows(2).all(|w| w[0] < w[1]) {
            quotient_index.insert(t.to_vec(), canonical.len());
            canonical.push(v);
            quotient_tuples.extend_from_slice(t);
        }
    }
    let nq = canonical.len();

    let mut projection = Vec::with_capacity(ordered.n_vertices());
    let mut preimages = vec![Vec::with_capacity(n_fact); nq];
    let mut sorted = vec![0usize; n];
    for v in 0..ordered.n_vertices() {
        sorted.copy_from_slice(ordered.tuple(v));
        sorted.sort_unstable();
        let q = quotient_index[&sorted];
        projection.push(q);
        preimages[q].push(v);
    }
    if let Some(q) = preimages.iter().position(|p| p.len() != n_fact) {
        return Err(Error::Invariant(format!(
            "quotient vertex {q} has {} preimages, expected {n_fact}",
            preimages[q].len()
        )));
    }

    let mut edge_count: HashMap<[usize; 2], usize> = HashMap::new();
    for &[a, b] in ordered.graph.edges() {
        let (qa, qb) = (projection[a], projection[b]);
        if qa == qb {
            return Err(Error::Invariant(format!("ordered edge ({a}, {b}) collapses under projection")));
        }
        *edge_count.entry([qa.min(qb), qa.max(qb)]).or_default() += 1;
    }
    if let Some((e, c)) = edge_count.iter().find(|(_, &c)| c != n_fact) {
        return Err(Error::Invariant(format!("quotient edge {e:?} has {c} preimages, expected {n_fact}")));
    }
    let mut qedges: Vec<[usize; 2]> = edge_count.into_keys().collect();
    qedges.sort_unstable();
    let quotient = Arc::new(Graph::new(nq, qedges));

    let tuple_of = |q: usize| &quotient_tuples[q * n..(q + 1) * n];
    let mut alignments = Vec::with_capacity(quotient.n_edges());
    let mut moves = Vec::with_capacity(quotient.n_edges());
    for &[a, b] in quotient.edges() {
        let (ca, cb) = (tuple_of(a), tuple_of(b));
        let from = *ca.iter().find(|s| !cb.contains(s)).unwrap();
        let to = *cb.iter().find(|s| !ca.contains(s)).unwrap();
        let lifted: Vec<usize> = ca.iter().map(|&s| if s == from { to } else { s }).collect();
        let images = lifted.iter().map(|s| cb.iter().position(|x| x == s).unwrap()).collect();
        alignments.push(Permutation::from_zero_based(images)?);
        moves.push((from, to));
    }

    Ok(ConfigGraphPair {
        ordered,
        quotient_tuples,
        quotient_index,
        quotient,
        projection,
        preimages,
        canonical,
        alignments,
        moves,
    })
}

/// Convenience: ordered graph and quotient in one call.
pub fn build_pair(lattice: &LatticeBox, particles: usize) -> Result<ConfigGraphPair> {
    build_quotient(build_ordered_graph(lattice, particles)?)
}

impl ConfigGraphPair {
    pub fn ordered(&self) -> &ConfigGraph {
        &self.ordered
    }

    pub fn ordered_graph(&self) -> &Graph {
        &self.ordered.graph
    }

    pub fn quotient(&self) -> &Graph {
        &self.quotient
    }

    pub fn shared_quotient(&self) -> Arc<Graph> {
        Arc::clone(&self.quotient)
    }

    pub fn shared_ordered(&self) -> Arc<Graph> {
        self.ordered.shared_graph()
    }

    pub fn lattice(&self) -> &LatticeBox {
        &self.ordered.lattice
    }

    pub fn particles(&self) -> usize {
        self.ordered.particles
    }

    pub fn n_quotient(&self) -> usize {
        self.quotient.n_vertices()
    }

    pub fn n_ordered(&self) -> usize {
        self.ordered.n_vertices()
    }

    /// `π` on vertex ids.
    pub fn project_vertex(&self, v: usize) -> usize {
        self.projection[v]
    }

    pub fn projection(&self) -> &[usize] {
        &self.projection
    }

    /// The `N!` ordered vertices over quotient vertex `q`.
    pub fn preimages(&self, q: usize) -> &[usize] {
        &self.preimages[q]
    }

    /// Ordered vertex of the sorted representative of `q`.
    pub fn canonical_vertex(&self, q: usize) -> usize {
        self.canonical[q]
    }

    pub fn quotient_tuple(&self, q: usize) -> &[usize] {
        let n = self.particles();
        &self.quotient_tuples[q * n..(q + 1) * n]
    }

    pub fn unordered_config(&self, q: usize) -> UnorderedConfig {
        UnorderedConfig(self.quotient_tuple(q).to_vec())
    }

    pub fn quotient_vertex_of(&self, config: &UnorderedConfig) -> Option<usize> {
        self.quotient_index.get(&config.0).copied()
    }

    /// Human-readable cell label, e.g. `{(0,0),(2,0)}`.
    pub fn quotient_label(&self, q: usize) -> String {
        let mut s = String::from("{");
        for (i, &site) in self.quotient_tuple(q).iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{}", self.lattice().format_site(site));
        }
        s.push('}');
        s
    }

    /// The permutation `a` with `lift(c_tail → head) = a·c_head`, where `c_v`
    /// is the sorted representative of `v`.
    pub fn alignment(&self, d: DirEdge) -> Permutation {
        if d.forward {
            self.alignments[d.edge].clone()
        } else {
            self.alignments[d.edge].inverse()
        }
    }

    /// `(vacated site, occupied site)` along a directed quotient edge.
    pub fn moved_sites(&self, d: DirEdge) -> (usize, usize) {
        let (a, b) = self.moves[d.edge];
        if d.forward {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// `τ` with `tuple(v) = τ·c_{π(v)}`.
    pub fn relative_permutation(&self, v: usize) -> Permutation {
        let c = self.quotient_tuple(self.projection[v]);
        let images = self
            .ordered
            .tuple(v)
            .iter()
            .map(|s| c.iter().position(|x| x == s).unwrap())
            .collect();
        Permutation::from_zero_based(images).unwrap()
    }

    /// Quotient edge under an ordered directed edge.
    pub fn project_dir_edge(&self, d: DirEdge) -> DirEdge {
        let g = &self.ordered.graph;
        let (a, b) = (self.projection[g.tail(d)], self.projection[g.head(d)]);
        self.quotient.dir_edge(a, b).expect("projection of an edge is an edge")
    }

    pub fn export(&self) -> GraphExport {
        let lat = self.lattice();
        let coords = |t: &[usize]| t.iter().map(|&s| lat.coords(s)).collect::<Vec<_>>();
        GraphExport {
            vertices: (0..self.n_ordered()).map(|v| coords(self.ordered.tuple(v))).collect(),
            edges: self.ordered.graph.edges().to_vec(),
            projection: self.projection.clone(),
            quotient_vertices: (0..self.n_quotient()).map(|q| coords(self.quotient_tuple(q))).collect(),
            quotient_edges: self.quotient.edges().to_vec(),
        }
    }
}

/// JSON layout of an exported configuration graph pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphExport {
    pub vertices: Vec<Vec<Vec<i64>>>,
    pub edges: Vec<[usize; 2]>,
    pub projection: Vec<usize>,
    pub quotient_vertices: Vec<Vec<Vec<i64>>>,
    pub quotient_edges: Vec<[usize; 2]>,
}

/// The unique ordered path over `path` that starts at `start`.
pub fn lift_path(pair: &ConfigGraphPair, path: &DiscretePath, start: &OrderedConfig) -> Result<DiscretePath> {
    path.validate(pair.quotient())?;
    let start_v = pair
        .ordered
        .vertex_of(&start.0)
        .ok_or_else(|| Error::Lift(format!("{:?} is not a vertex of the ordered graph", start.0)))?;
    if pair.projection[start_v] != path.start() {
        return Err(Error::Lift(format!(
            "start {:?} does not project to the path head {}",
            start.0,
            pair.quotient_label(path.start())
        )));
    }
    let mut current = start.0.clone();
    let mut out = vec![start_v];
    for w in path.0.windows(2) {
        let d = pair.quotient.dir_edge(w[0], w[1]).unwrap();
        let (from, to) = pair.moved_sites(d);
        let k = current.iter().position(|&s| s == from).unwrap();
        current[k] = to;
        out.push(pair.ordered.index[&current]);
    }
    Ok(DiscretePath(out))
}

/// `σ_α`: the lift of `loop_path` from `base` ends at `σ_α·base`.
pub fn loop_permutation(pair: &ConfigGraphPair, loop_path: &DiscretePath, base: &OrderedConfig) -> Result<Permutation> {
    if !loop_path.is_loop() {
        return Err(Error::NotALoop { start: loop_path.start(), end: loop_path.end() });
    }
    let lifted = lift_path(pair, loop_path, base)?;
    let end = pair.ordered.tuple(lifted.end());
    let images = end.iter().map(|s| base.0.iter().position(|x| x == s).unwrap()).collect();
    Permutation::from_zero_based(images)
}

/// Random walk of `steps` steps from `base`, closed by a shortest path back.
pub fn random_loop<R: Rng + ?Sized>(graph: &Graph, base: usize, steps: usize, rng: &mut R) -> DiscretePath {
    let mut walk = vec![base];
    let mut cur = base;
    for _ in 0..steps {
        match graph.neighbors(cur).choose(rng) {
            Some(&(next, _)) => {
                walk.push(next);
                cur = next;
            }
            None => break,
        }
    }
    let back = graph.shortest_path(cur, base).expect("walk stays in the base component");
    walk.extend_from_slice(&back[1..]);
    DiscretePath(walk)
}

/// A counter-clockwise exchange of two neighbouring particles around the unit
/// plaquette at the origin of axes 0 and 1. The remaining particles sit on the
/// lowest-index sites outside that plaquette.
///
/// Returns the quotient loop and the ordered base tuple, whose first two
/// entries are the exchanged particles.
pub fn exchange_loop(pair: &ConfigGraphPair) -> Result<(DiscretePath, OrderedConfig)> {
    let lat = pair.lattice();
    let n = pair.particles();
    if lat.dim() < 2 || lat.sides()[0] < 2 || lat.sides()[1] < 2 || n < 2 {
        return Err(Error::Dimension(
            "an exchange loop needs d >= 2, two particles and sides >= 2 on axes 0 and 1".into(),
        ));
    }
    let corner = |x: i64, y: i64| {
        let mut c = vec![0i64; lat.dim()];
        c[0] = x;
        c[1] = y;
        lat.site_at(&c).unwrap()
    };
    let (s00, s10, s11, s01) = (corner(0, 0), corner(1, 0), corner(1, 1), corner(0, 1));
    let plaquette = [s00, s10, s11, s01];
    let others: Vec<usize> = (0..lat.site_count()).filter(|s| !plaquette.contains(s)).take(n - 2).collect();
    if others.len() < n - 2 {
        return Err(Error::Capacity { sites: lat.site_count(), particles: n + 2 });
    }
    let config = |a: usize, b: usize| {
        let mut sites = vec![a, b];
        sites.extend_from_slice(&others);
        project(&OrderedConfig(sites)).map(|u| pair.quotient_vertex_of(&u).unwrap())
    };
    let path = vec![
        config(s00, s10)?,
        config(s00, s11)?,
        config(s10, s11)?,
        config(s10, s01)?,
        config(s10, s00)?,
    ];
    let mut base = vec![s00, s10];
    base.extend_from_slice(&others);
    let path = DiscretePath(path);
    path.validate(pair.quotient())?;
    Ok((path, OrderedConfig(base)))
}
