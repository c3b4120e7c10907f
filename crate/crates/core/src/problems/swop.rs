use std::fmt;
use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::circuit::CircuitBuilder;
use super::graph::Graph;
use crate::error::{Error, Result};
use crate::model::{check_arity, LocalSearchProblem, Rational, Sense, Solution};

/// Built-in certifying functions. Vertex-based kinds (independent set,
/// clique, vertex cover) reject any selected edge element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Certifier {
    IndependentSet,
    Clique,
    VertexCover,
    AllSubsets,
    /// Each group of ground elements is selected entirely or not at all.
    GroupedAllOrNone(Vec<Vec<usize>>),
    /// A vertex set `U` together with exactly the edges crossing `U`.
    CutWithBoundary,
    /// Conjunction.
    All(Vec<Certifier>),
}

impl Certifier {
    pub fn name(&self) -> &'static str {
        match self {
            Certifier::IndependentSet => "independent-set",
            Certifier::Clique => "clique",
            Certifier::VertexCover => "vertex-cover",
            Certifier::AllSubsets => "all-subsets",
            Certifier::GroupedAllOrNone(_) => "grouped-all-or-none",
            Certifier::CutWithBoundary => "cut-with-boundary",
            Certifier::All(_) => "all",
        }
    }

    fn is_vertex_based(&self) -> bool {
        matches!(self, Certifier::IndependentSet | Certifier::Clique | Certifier::VertexCover)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Clause {
    NotBoth(usize, usize),
    AtLeastOne(usize, usize),
    Zero(usize),
    Equal(usize, usize),
    /// `e` is set iff exactly one of `a`, `b` is set.
    Xor { e: usize, a: usize, b: usize },
}

impl Clause {
    fn holds(self, s: &Solution) -> bool {
        match self {
            Clause::NotBoth(a, b) => !(s.get(a) && s.get(b)),
            Clause::AtLeastOne(a, b) => s.get(a) || s.get(b),
            Clause::Zero(a) => !s.get(a),
            Clause::Equal(a, b) => s.get(a) == s.get(b),
            Clause::Xor { e, a, b } => s.get(e) == (s.get(a) != s.get(b)),
        }
    }

    fn max_index(self) -> usize {
        match self {
            Clause::NotBoth(a, b) | Clause::AtLeastOne(a, b) | Clause::Equal(a, b) => a.max(b),
            Clause::Zero(a) => a,
            Clause::Xor { e, a, b } => e.max(a).max(b),
        }
    }

    fn describe(self) -> String {
        match self {
            Clause::NotBoth(a, b) => format!("elements {a} and {b} are both selected"),
            Clause::AtLeastOne(a, b) => format!("neither {a} nor {b} is selected"),
            Clause::Zero(a) => format!("element {a} may not be selected"),
            Clause::Equal(a, b) => format!("elements {a} and {b} must be selected together"),
            Clause::Xor { e, a, b } => format!("edge element {e} must be selected iff exactly one of {a}, {b} is"),
        }
    }
}

#[derive(Debug, Clone)]
struct IsIndex {
    /// Neighborhood of each vertex as a bitset over the vertices.
    adj: Vec<Solution>,
    self_loop: Vec<bool>,
}

/// Subset Weight Optimization with the c-swap neighborhood. The ground set is
/// the vertices, followed by the edges when `include_edges` is set.
#[derive(Clone)]
pub struct SwopInstance {
    graph: Graph,
    vertex_weights: Vec<Rational>,
    edge_weights: Vec<Rational>,
    certifier: Certifier,
    c: usize,
    include_edges: bool,
    clauses: Vec<(Clause, &'static str)>,
    by_max: Vec<Vec<usize>>,
    scale: BigInt,
    scaled: Option<Vec<i64>>,
    fast_is: Option<IsIndex>,
}

impl fmt::Debug for SwopInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SwopInstance")
            .field("graph", &self.graph)
            .field("vertex_weights", &self.vertex_weights)
            .field("edge_weights", &self.edge_weights)
            .field("certifier", &self.certifier)
            .field("c", &self.c)
            .field("include_edges", &self.include_edges)
            .finish()
    }
}

impl PartialEq for SwopInstance {
    fn eq(&self, other: &Self) -> bool {
        self.graph == other.graph
            && self.vertex_weights == other.vertex_weights
            && self.edge_weights == other.edge_weights
            && self.certifier == other.certifier
            && self.c == other.c
            && self.include_edges == other.include_edges
    }
}

impl SwopInstance {
    pub fn new(
        graph: Graph,
        vertex_weights: Vec<Rational>,
        edge_weights: Vec<Rational>,
        certifier: Certifier,
        c: usize,
        include_edges: bool,
    ) -> Result<Self> {
        let n = graph.vertex_count();
        let m = graph.edge_count();
        if vertex_weights.len() != n {
            return Err(Error::Arity { expected: n, got: vertex_weights.len() });
        }
        if edge_weights.len() != m {
            return Err(Error::Arity { expected: m, got: edge_weights.len() });
        }
        if c == 0 {
            return Err(Error::InputContract("swap bound c must be positive".into()));
        }
        let ground = n + if include_edges { m } else { 0 };
        let mut clauses = Vec::new();
        compile(&certifier, &graph, include_edges, ground, &mut clauses)?;
        let mut by_max = vec![Vec::new(); ground];
        for (i, (clause, _)) in clauses.iter().enumerate() {
            by_max[clause.max_index()].push(i);
        }

        let weights: Vec<&Rational> =
            vertex_weights.iter().chain(edge_weights.iter().take(if include_edges { m } else { 0 })).collect();
        let scale = weights.iter().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let scaled_big: Vec<BigInt> = weights.iter().map(|w| w.numer() * (&scale / w.denom())).collect();
        let total: BigInt = scaled_big.iter().map(|w| w.abs()).sum();
        let scaled = if total < BigInt::from(1u64 << 62) {
            Some(scaled_big.iter().map(|w| w.to_i64().expect("bounded")).collect())
        } else {
            None
        };

        let fast_is = (certifier == Certifier::IndependentSet && !include_edges && scaled.is_some()).then(|| {
            let mut adj = vec![Solution::empty(n); n];
            let mut self_loop = vec![false; n];
            for &(u, v) in graph.edges() {
                if u == v {
                    self_loop[u] = true;
                } else {
                    adj[u].set(v, true);
                    adj[v].set(u, true);
                }
            }
            IsIndex { adj, self_loop }
        });

        Ok(SwopInstance {
            graph,
            vertex_weights,
            edge_weights,
            certifier,
            c,
            include_edges,
            clauses,
            by_max,
            scale,
            scaled,
            fast_is,
        })
    }

    /// A vertex-weighted instance with zero edge weights and vertex-only ground set.
    pub fn vertex_weighted(graph: Graph, weights: Vec<Rational>, certifier: Certifier, c: usize) -> Result<Self> {
        let m = graph.edge_count();
        SwopInstance::new(graph, weights, vec![Rational::zero(); m], certifier, c, false)
    }

    pub fn weighted_independent_set(graph: Graph, weights: Vec<Rational>, c: usize) -> Result<Self> {
        SwopInstance::vertex_weighted(graph, weights, Certifier::IndependentSet, c)
    }

    /// Same structure with the ground-element weights replaced.
    pub fn with_ground_weights(&self, weights: &[Rational]) -> Result<Self> {
        if weights.len() != self.ground_size() {
            return Err(Error::Arity { expected: self.ground_size(), got: weights.len() });
        }
        let n = self.graph.vertex_count();
        let mut edge_weights = self.edge_weights.clone();
        if self.include_edges {
            edge_weights = weights[n..].to_vec();
        }
        SwopInstance::new(
            self.graph.clone(),
            weights[..n].to_vec(),
            edge_weights,
            self.certifier.clone(),
            self.c,
            self.include_edges,
        )
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn vertex_weights(&self) -> &[Rational] {
        &self.vertex_weights
    }

    pub fn edge_weights(&self) -> &[Rational] {
        &self.edge_weights
    }

    pub fn certifier(&self) -> &Certifier {
        &self.certifier
    }

    pub fn swap_bound(&self) -> usize {
        self.c
    }

    pub fn include_edges(&self) -> bool {
        self.include_edges
    }

    /// Weight of ground element `i`.
    pub fn weight(&self, i: usize) -> &Rational {
        let n = self.graph.vertex_count();
        if i < n {
            &self.vertex_weights[i]
        } else {
            &self.edge_weights[i - n]
        }
    }

    pub fn ground_weights(&self) -> Vec<Rational> {
        (0..self.ground_size()).map(|i| self.weight(i).clone()).collect()
    }

    /// Common denominator and the integer weights it yields, when they fit
    /// comfortably in 64 bits.
    pub fn scaled_weights(&self) -> Option<(&BigInt, &[i64])> {
        self.scaled.as_deref().map(|w| (&self.scale, w))
    }

    pub fn certify_detail(&self, s: &Solution) -> Result<()> {
        check_arity(self, s)?;
        for (clause, name) in &self.clauses {
            if !clause.holds(s) {
                return Err(Error::Certification { certifier: name.to_string(), detail: clause.describe() });
            }
        }
        Ok(())
    }

    /// A gate that is true iff the element gates `bits` encode a certified
    /// solution.
    pub(crate) fn validity_gate(&self, b: &mut CircuitBuilder, bits: &[usize]) -> usize {
        let lits: Vec<usize> = self
            .clauses
            .iter()
            .map(|(clause, _)| match *clause {
                Clause::NotBoth(x, y) => {
                    let both = b.and(&[bits[x], bits[y]]);
                    b.not(both)
                }
                Clause::AtLeastOne(x, y) => b.or(&[bits[x], bits[y]]),
                Clause::Zero(x) => b.not(bits[x]),
                Clause::Equal(x, y) => {
                    let d = b.xor(bits[x], bits[y]);
                    b.not(d)
                }
                Clause::Xor { e, a, b: c } => {
                    let ab = b.xor(bits[a], bits[c]);
                    let d = b.xor(bits[e], ab);
                    b.not(d)
                }
            })
            .collect();
        b.and(&lits)
    }

    fn prefix_ok(&self, s: &Solution, k: usize) -> bool {
        self.by_max[k].iter().all(|&ci| self.clauses[ci].0.holds(s))
    }

    fn dfs_all(&self, k: usize, cur: &mut Solution, visit: &mut dyn FnMut(&Solution) -> ControlFlow<()>) -> ControlFlow<()> {
        if k == cur.len() {
            return visit(cur);
        }
        for bit in [false, true] {
            cur.set(k, bit);
            if self.prefix_ok(cur, k) {
                self.dfs_all(k + 1, cur, visit)?;
            }
        }
        cur.set(k, false);
        ControlFlow::Continue(())
    }

    fn dfs_near(&self, s: &Solution, k: usize, dist: usize, cur: &mut Solution, out: &mut Vec<Solution>) {
        if k == cur.len() {
            if dist > 0 {
                out.push(cur.clone());
            }
            return;
        }
        for bit in [false, true] {
            let d = dist + usize::from(bit != s.get(k));
            if d > self.c {
                continue;
            }
            cur.set(k, bit);
            if self.prefix_ok(cur, k) {
                self.dfs_near(s, k + 1, d, cur, out);
            }
        }
        cur.set(k, s.get(k));
    }

    fn scaled_sum(&self, s: &Solution) -> Option<i128> {
        self.scaled.as_ref().map(|w| s.ones().map(|i| w[i] as i128).sum())
    }

    /// Enumerates the c-swap moves of an independent set as (added, removed)
    /// pairs with their scaled gain.
    fn is_moves(&self, s: &Solution, f: &mut dyn FnMut(&[usize], &[usize], i64) -> ControlFlow<()>) {
        let idx = self.fast_is.as_ref().expect("independent-set index");
        let w = self.scaled.as_ref().expect("scaled weights");
        let n = self.graph.vertex_count();
        let members: Vec<usize> = s.ones().collect();
        let candidates: Vec<(usize, Vec<usize>)> = (0..n)
            .filter(|&a| !s.get(a) && !idx.self_loop[a])
            .filter_map(|a| {
                let conflicts: Vec<usize> = idx.adj[a].and(s).ones().collect();
                (conflicts.len() < self.c).then_some((a, conflicts))
            })
            .collect();
        let mut added = Vec::new();
        let mut forced = Vec::new();
        let _ = self.is_moves_rec(&candidates, 0, &members, w, idx, &mut added, &mut forced, f);
    }

    #[allow(clippy::too_many_arguments)]
    fn is_moves_rec(
        &self,
        candidates: &[(usize, Vec<usize>)],
        from: usize,
        members: &[usize],
        w: &[i64],
        idx: &IsIndex,
        added: &mut Vec<usize>,
        forced: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize], &[usize], i64) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let budget = self.c - added.len() - forced.len();
        let gain_base: i64 = added.iter().map(|&a| w[a]).sum::<i64>() - forced.iter().map(|&r| w[r]).sum::<i64>();
        let free: Vec<usize> = members.iter().copied().filter(|r| !forced.contains(r)).collect();
        let mut removed = forced.clone();
        let mut extra_gain = 0i64;
        extras(&free, 0, budget, !added.is_empty(), &mut removed, &mut extra_gain, w, &mut |rem, g| {
            f(added, rem, gain_base + g)
        })?;

        for (ci, (a, conflicts)) in candidates.iter().enumerate().skip(from) {
            if added.iter().any(|&b| idx.adj[*a].get(b)) {
                continue;
            }
            let new_forced: Vec<usize> = conflicts.iter().copied().filter(|r| !forced.contains(r)).collect();
            if added.len() + 1 + forced.len() + new_forced.len() > self.c {
                continue;
            }
            added.push(*a);
            let before = forced.len();
            forced.extend(new_forced);
            self.is_moves_rec(candidates, ci + 1, members, w, idx, added, forced, f)?;
            forced.truncate(before);
            added.pop();
        }
        ControlFlow::Continue(())
    }

    fn is_neighbors(&self, s: &Solution, improving_only: bool) -> Vec<Solution> {
        let mut out = Vec::new();
        self.is_moves(s, &mut |added, removed, gain| {
            if !improving_only || gain > 0 {
                let mut t = s.clone();
                for &r in removed {
                    t.set(r, false);
                }
                for &a in added {
                    t.set(a, true);
                }
                out.push(t);
            }
            ControlFlow::Continue(())
        });
        out.sort();
        out
    }

    fn is_has_improving(&self, s: &Solution) -> bool {
        let w = self.scaled.as_ref().expect("scaled weights");
        // Removing negative-weight members alone is already improving.
        if s.ones().any(|i| w[i] < 0) {
            return true;
        }
        let mut found = false;
        self.is_moves_nonneg(s, &mut |gain| {
            if gain > 0 {
                found = true;
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        found
    }

    /// Best gains of each added set when all members have nonnegative weight,
    /// so extra removals never help.
    fn is_moves_nonneg(&self, s: &Solution, f: &mut dyn FnMut(i64) -> ControlFlow<()>) {
        let idx = self.fast_is.as_ref().expect("independent-set index");
        let w = self.scaled.as_ref().expect("scaled weights");
        let n = self.graph.vertex_count();
        let mut candidates: Vec<(usize, Solution)> = Vec::new();
        for a in 0..n {
            if s.get(a) || idx.self_loop[a] || w[a] <= 0 {
                continue;
            }
            let conflicts = idx.adj[a].and(s);
            let k = conflicts.count_ones();
            if k >= self.c {
                continue;
            }
            let loss: i64 = conflicts.ones().map(|r| w[r]).sum();
            if k == 0 && w[a] > 0 {
                let _ = f(w[a]);
                return;
            }
            if w[a] > loss && k < self.c {
                let _ = f(w[a] - loss);
                return;
            }
            candidates.push((a, conflicts));
        }
        // Every single addition fails; try sets of two or more.
        fn rec(
            cands: &[(usize, Solution)],
            from: usize,
            c: usize,
            w: &[i64],
            idx: &IsIndex,
            added: &mut Vec<usize>,
            forced: &Solution,
            f: &mut dyn FnMut(i64) -> ControlFlow<()>,
        ) -> ControlFlow<()> {
            for (ci, (a, conflicts)) in cands.iter().enumerate().skip(from) {
                if added.iter().any(|&b| idx.adj[*a].get(b)) {
                    continue;
                }
                let nf = forced.or(conflicts);
                if added.len() + 1 + nf.count_ones() > c {
                    continue;
                }
                added.push(*a);
                if added.len() >= 2 {
                    let gain: i64 = added.iter().map(|&x| w[x]).sum::<i64>() - nf.ones().map(|r| w[r]).sum::<i64>();
                    f(gain)?;
                }
                rec(cands, ci + 1, c, w, idx, added, &nf, f)?;
                added.pop();
            }
            ControlFlow::Continue(())
        }
        let forced = Solution::empty(s.len());
        let _ = rec(&candidates, 0, self.c, w, idx, &mut Vec::new(), &forced, f);
    }

    fn maximal_independent_sets(&self, visit: &mut dyn FnMut(&Solution) -> ControlFlow<()>) {
        let idx = self.fast_is.as_ref().expect("independent-set index");
        let n = self.graph.vertex_count();
        let p = Solution::from_indices(n, (0..n).filter(|&v| !idx.self_loop[v]));
        let mut r = Solution::empty(n);
        let _ = bron_kerbosch(idx, &mut r, p, Solution::empty(n), visit);
    }
}

fn bron_kerbosch(
    idx: &IsIndex,
    r: &mut Solution,
    mut p: Solution,
    mut x: Solution,
    visit: &mut dyn FnMut(&Solution) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if p.is_zero() && x.is_zero() {
        return visit(r);
    }
    // Pivot on the vertex whose closed neighborhood covers the fewest candidates.
    let pivot = p
        .or(&x)
        .ones()
        .min_by_key(|&u| {
            let mut closed = idx.adj[u].clone();
            closed.set(u, true);
            p.intersection_count(&closed)
        })
        .expect("nonempty");
    let mut branch = idx.adj[pivot].clone();
    branch.set(pivot, true);
    let branch = p.and(&branch);
    for v in branch.ones().collect::<Vec<_>>() {
        let mut closed = idx.adj[v].clone();
        closed.set(v, true);
        r.set(v, true);
        bron_kerbosch(idx, r, p.and_not(&closed), x.and_not(&closed), visit)?;
        r.set(v, false);
        p.set(v, false);
        x.set(v, true);
    }
    ControlFlow::Continue(())
}

#[allow(clippy::too_many_arguments)]
fn extras(
    free: &[usize],
    from: usize,
    budget: usize,
    nonempty: bool,
    removed: &mut Vec<usize>,
    gain: &mut i64,
    w: &[i64],
    emit: &mut dyn FnMut(&[usize], i64) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if nonempty {
        emit(removed, *gain)?;
    }
    if budget == 0 {
        return ControlFlow::Continue(());
    }
    for i in from..free.len() {
        removed.push(free[i]);
        *gain -= w[free[i]];
        extras(free, i + 1, budget - 1, true, removed, gain, w, emit)?;
        *gain += w[free[i]];
        removed.pop();
    }
    ControlFlow::Continue(())
}

fn compile(
    cert: &Certifier,
    graph: &Graph,
    include_edges: bool,
    ground: usize,
    out: &mut Vec<(Clause, &'static str)>,
) -> Result<()> {
    let n = graph.vertex_count();
    let name = cert.name();
    if cert.is_vertex_based() && include_edges {
        for e in 0..graph.edge_count() {
            out.push((Clause::Zero(n + e), name));
        }
    }
    match cert {
        Certifier::IndependentSet => {
            for &(u, v) in graph.edges() {
                out.push((Clause::NotBoth(u, v), name));
            }
        }
        Certifier::Clique => {
            for u in 0..n {
                for v in u + 1..n {
                    if !graph.has_edge(u, v) && !graph.has_edge(v, u) {
                        out.push((Clause::NotBoth(u, v), name));
                    }
                }
            }
        }
        Certifier::VertexCover => {
            for &(u, v) in graph.edges() {
                out.push((Clause::AtLeastOne(u, v), name));
            }
        }
        Certifier::AllSubsets => {}
        Certifier::GroupedAllOrNone(groups) => {
            for group in groups {
                if let Some(&bad) = group.iter().find(|&&i| i >= ground) {
                    return Err(Error::InputContract(format!("group element {bad} outside ground set of size {ground}")));
                }
                for pair in group.windows(2) {
                    out.push((Clause::Equal(pair[0], pair[1]), name));
                }
            }
        }
        Certifier::CutWithBoundary => {
            if !include_edges {
                return Err(Error::InputContract("cut-with-boundary needs edges in the ground set".into()));
            }
            for (e, &(u, v)) in graph.edges().iter().enumerate() {
                out.push((Clause::Xor { e: n + e, a: u, b: v }, name));
            }
        }
        Certifier::All(parts) => {
            for part in parts {
                compile(part, graph, include_edges, ground, out)?;
            }
        }
    }
    Ok(())
}

fn binomial_sum(g: usize, c: usize) -> BigInt {
    let mut total = BigInt::zero();
    let mut term = BigInt::one();
    for j in 1..=c.min(g) {
        term = term * BigInt::from(g - j + 1) / BigInt::from(j);
        total += &term;
    }
    total
}

impl LocalSearchProblem for SwopInstance {
    fn ground_size(&self) -> usize {
        self.graph.vertex_count() + if self.include_edges { self.graph.edge_count() } else { 0 }
    }

    fn sense(&self) -> Sense {
        Sense::Maximize
    }

    fn certify(&self, s: &Solution) -> Result<()> {
        self.certify_detail(s)
    }

    fn objective(&self, s: &Solution) -> Rational {
        match self.scaled_sum(s) {
            Some(v) => Rational::new(BigInt::from(v), self.scale.clone()),
            None => s.ones().map(|i| self.weight(i).clone()).sum(),
        }
    }

    fn objective_scaled(&self, s: &Solution) -> Option<i128> {
        self.scaled_sum(s)
    }

    fn neighbors(&self, s: &Solution) -> Vec<Solution> {
        if self.fast_is.is_some() {
            return self.is_neighbors(s, false);
        }
        let mut out = Vec::new();
        let mut cur = s.clone();
        self.dfs_near(s, 0, 0, &mut cur, &mut out);
        out
    }

    fn improving_neighbors(&self, s: &Solution) -> Vec<Solution> {
        if self.fast_is.is_some() {
            return self.is_neighbors(s, true);
        }
        let base = self.objective_scaled(s);
        match base {
            Some(b) => self.neighbors(s).into_iter().filter(|t| self.scaled_sum(t).unwrap() > b).collect(),
            None => {
                let b = self.objective(s);
                self.neighbors(s).into_iter().filter(|t| self.objective(t) > b).collect()
            }
        }
    }

    fn has_improving_neighbor(&self, s: &Solution) -> bool {
        if self.fast_is.is_some() {
            return self.is_has_improving(s);
        }
        !self.improving_neighbors(s).is_empty()
    }

    fn is_neighbor(&self, a: &Solution, b: &Solution) -> bool {
        a.len() == b.len()
            && a.len() == self.ground_size()
            && a != b
            && a.distance(b) <= self.c
            && self.certify_detail(a).is_ok()
            && self.certify_detail(b).is_ok()
    }

    fn neighborhood_arity_bound(&self) -> String {
        let g = self.ground_size();
        format!("{} (sum of C({g}, j) for j = 1..={})", binomial_sum(g, self.c), self.c)
    }

    fn for_each_solution(&self, visit: &mut dyn FnMut(&Solution) -> ControlFlow<()>) {
        let mut cur = Solution::empty(self.ground_size());
        let _ = self.dfs_all(0, &mut cur, visit);
    }

    fn for_each_optimum_candidate(&self, visit: &mut dyn FnMut(&Solution) -> ControlFlow<()>) {
        // With strictly positive weights a non-maximal independent set always
        // has an improving single addition, so maximal sets suffice.
        if self.fast_is.is_some() && self.scaled.as_ref().is_some_and(|w| w.iter().all(|&x| x > 0)) {
            self.maximal_independent_sets(visit);
        } else {
            self.for_each_solution(visit);
        }
    }
}
