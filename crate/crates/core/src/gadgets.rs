//! Elevator and simulator gadgets on a labeled, vertex-weighted graph builder.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::model::{Rational, Solution};
use crate::problems::{Graph, MaxCutInstance, SwopInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// Provenance of a constructed vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Role {
    /// `v_A`, `v_A'`, `v_A''` for copy 0, 1, 2 (same for side B).
    Core { vertex: usize, side: Side, copy: u8 },
    /// `x_{from,to}`.
    EdgeCopy { from: usize, to: usize },
    Level { gadget: usize, direction: Direction, index: usize },
    Turn { gadget: usize },
    Named(String),
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Core { vertex, side, copy } => {
                write!(f, "v{vertex}_{side:?}{}", "'".repeat(*copy as usize))
            }
            Role::EdgeCopy { from, to } => write!(f, "x_{from}_{to}"),
            Role::Level { gadget, direction, index } => {
                let d = if *direction == Direction::Up { "up" } else { "down" };
                write!(f, "g{gadget}.{d}{}", index + 1)
            }
            Role::Turn { gadget } => write!(f, "g{gadget}.t"),
            Role::Named(s) => f.write_str(s),
        }
    }
}

/// Mutable vertex-weighted graph with role labels and a global vertex order in
/// which "early" vertices precede all others, ties broken by insertion.
#[derive(Debug, Clone, Default)]
pub struct GraphBuilder {
    weights: Vec<Rational>,
    roles: Vec<Role>,
    early: Vec<bool>,
    edges: BTreeSet<(usize, usize)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        GraphBuilder::default()
    }

    pub fn add_vertex(&mut self, weight: Rational, role: Role) -> usize {
        self.weights.push(weight);
        self.roles.push(role);
        self.early.push(false);
        self.weights.len() - 1
    }

    pub fn add_early_vertex(&mut self, weight: Rational, role: Role) -> usize {
        let v = self.add_vertex(weight, role);
        self.early[v] = true;
        v
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u != v {
            self.edges.insert((u.min(v), u.max(v)));
        }
    }

    pub fn connect_all(&mut self, left: &[usize], right: &[usize]) {
        for &u in left {
            for &v in right {
                self.add_edge(u, v);
            }
        }
    }

    pub fn make_clique(&mut self, vertices: &[usize]) {
        for (i, &u) in vertices.iter().enumerate() {
            for &v in &vertices[i + 1..] {
                self.add_edge(u, v);
            }
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn vertex_count(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, v: usize) -> &Rational {
        &self.weights[v]
    }

    pub fn set_weight(&mut self, v: usize, w: Rational) {
        self.weights[v] = w;
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn role(&self, v: usize) -> &Role {
        &self.roles[v]
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    /// Position key in the global vertex order.
    pub fn order_key(&self, v: usize) -> (bool, usize) {
        (!self.early[v], v)
    }

    pub fn sort_in_order(&self, vertices: &mut [usize]) {
        vertices.sort_by_key(|&v| self.order_key(v));
    }

    pub fn graph(&self) -> Graph {
        Graph::new(self.vertex_count(), self.edges.iter().copied().collect(), false).expect("edges are in range")
    }

    pub fn to_wis(&self, c: usize) -> Result<SwopInstance> {
        SwopInstance::weighted_independent_set(self.graph(), self.weights.clone(), c)
    }
}

/// An `X`-elevator: a clique of levels where level `i` (0-based) sees the
/// first `i + 2` base vertices, and all levels share an outside neighborhood.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Elevator {
    pub direction: Direction,
    pub base: Vec<usize>,
    pub levels: Vec<usize>,
    pub external: Vec<usize>,
}

impl Elevator {
    pub fn top(&self) -> usize {
        *self.levels.last().expect("elevators have at least one level")
    }

    pub fn bottom(&self) -> usize {
        self.levels[0]
    }
}

/// Level weights from the base weights: each level adds the next base weight
/// and a margin of `+1` (up) or `-1` (down).
pub fn elevator_level_weights(direction: Direction, base: &[Rational]) -> Result<Vec<Rational>> {
    if base.len() < 2 {
        return Err(Error::Arity { expected: 2, got: base.len() });
    }
    let margin = match direction {
        Direction::Up => Rational::one(),
        Direction::Down => -Rational::one(),
    };
    let mut out = Vec::with_capacity(base.len() - 1);
    let mut cur = &base[0] + &base[1] + &margin;
    out.push(cur.clone());
    for w in &base[2..] {
        cur = cur + w + &margin;
        out.push(cur.clone());
    }
    Ok(out)
}

/// Adds an elevator over `base` (taken in the given order) whose levels are
/// adjacent to every vertex of `external`.
pub fn attach_elevator(
    builder: &mut GraphBuilder,
    direction: Direction,
    base: &[usize],
    external: &[usize],
    gadget: usize,
) -> Result<Elevator> {
    let base_weights: Vec<Rational> = base.iter().map(|&x| builder.weight(x).clone()).collect();
    let level_weights = elevator_level_weights(direction, &base_weights)?;
    let levels: Vec<usize> = level_weights
        .into_iter()
        .enumerate()
        .map(|(index, w)| builder.add_vertex(w, Role::Level { gadget, direction, index }))
        .collect();
    builder.make_clique(&levels);
    for (i, &l) in levels.iter().enumerate() {
        builder.connect_all(&[l], &base[..i + 2]);
    }
    builder.connect_all(&levels, external);
    Ok(Elevator { direction, base: base.to_vec(), levels, external: external.to_vec() })
}

/// The improving 3-swap of an up-elevator: drop level `i` and base vertex
/// `i + 2`, take level `i + 1` (all 0-based).
pub fn elevator_improving_step(inst: &SwopInstance, elev: &Elevator, s: &Solution, i: usize) -> Result<Solution> {
    use crate::model::LocalSearchProblem;
    inst.certify(s)?;
    if i + 1 >= elev.levels.len() {
        return Err(Error::NoStep(format!("level {} is the top of the elevator", i + 1)));
    }
    if !s.get(elev.levels[i]) {
        return Err(Error::Precondition(format!("level {} is not in the solution", i + 1)));
    }
    let mut t = s.clone();
    t.set(elev.levels[i], false);
    t.set(elev.base[i + 2], false);
    t.set(elev.levels[i + 1], true);
    Ok(t)
}

/// The Max Cut core: six vertices per source vertex and two per edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutCore {
    /// `core[v][side][copy]`.
    pub core: Vec<[[usize; 3]; 2]>,
    pub edge_copies: HashMap<(usize, usize), usize>,
    pub neighbors: Vec<Vec<usize>>,
    pub alpha: u64,
}

impl CutCore {
    /// Adds the core for `inst`. Heavy vertices weigh `4·alpha·n`, primed ones
    /// `alpha = 2·w(E)`, and `x_{u,v}` the weight of `uv`.
    pub fn build(builder: &mut GraphBuilder, inst: &MaxCutInstance) -> Result<CutCore> {
        let n = inst.vertex_count();
        let alpha = inst
            .total_weight()
            .checked_mul(2)
            .ok_or_else(|| Error::Resource("core weight overflows 64 bits".into()))?;
        let heavy = alpha
            .checked_mul(4 * n as u64)
            .ok_or_else(|| Error::Resource("core weight overflows 64 bits".into()))?;
        let int = |v: u64| Rational::from_integer(BigInt::from(v));
        let mut core = Vec::with_capacity(n);
        for v in 0..n {
            let mut sides = [[0; 3]; 2];
            for (si, side) in [Side::A, Side::B].into_iter().enumerate() {
                for copy in 0..3u8 {
                    let role = Role::Core { vertex: v, side, copy };
                    sides[si][copy as usize] = if copy == 0 {
                        builder.add_vertex(int(heavy), role)
                    } else {
                        builder.add_early_vertex(int(alpha), role)
                    };
                }
            }
            builder.connect_all(&sides[0], &sides[1]);
            core.push(sides);
        }
        let mut edge_copies = HashMap::new();
        for (&(u, v), &w) in inst.graph().edges().iter().zip(inst.weights()) {
            for (a, b) in [(u, v), (v, u)] {
                let x = builder.add_vertex(int(w), Role::EdgeCopy { from: a, to: b });
                edge_copies.insert((a, b), x);
            }
        }
        let neighbors = inst.graph().adjacency();
        let cc = CutCore { core, edge_copies, neighbors, alpha };
        // x_{u,v} sees v's A-side and every x_{v,w}; x_{v,u} sees v's B-side and every x_{w,v}.
        for v in 0..n {
            for &u in &cc.neighbors[v] {
                let into_v = cc.x(u, v);
                builder.connect_all(&[into_v], &cc.triple(v, Side::A));
                for &w in &cc.neighbors[v] {
                    builder.add_edge(into_v, cc.x(v, w));
                }
                let out_of_v = cc.x(v, u);
                builder.connect_all(&[out_of_v], &cc.triple(v, Side::B));
                for &w in &cc.neighbors[v] {
                    builder.add_edge(out_of_v, cc.x(w, v));
                }
            }
        }
        Ok(cc)
    }

    pub fn vertex_count(&self) -> usize {
        self.core.len()
    }

    pub fn triple(&self, v: usize, side: Side) -> [usize; 3] {
        self.core[v][side as usize]
    }

    pub fn heavy(&self, v: usize, side: Side) -> usize {
        self.core[v][side as usize][0]
    }

    pub fn primes(&self, v: usize, side: Side) -> [usize; 2] {
        let t = self.triple(v, side);
        [t[1], t[2]]
    }

    pub fn x(&self, from: usize, to: usize) -> usize {
        self.edge_copies[&(from, to)]
    }

    /// `g(A, B)`: the side triples and `x_{u,v}` for each cut edge with `u ∈ A`.
    pub fn g(&self, partition: &Solution, total: usize) -> Solution {
        let mut s = Solution::empty(total);
        for v in 0..self.vertex_count() {
            let side = if partition.get(v) { Side::B } else { Side::A };
            for x in self.triple(v, side) {
                s.set(x, true);
            }
        }
        for (&(a, b), &x) in &self.edge_copies {
            if !partition.get(a) && partition.get(b) {
                s.set(x, true);
            }
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FlipDirection {
    AToB,
    BToA,
}

impl FlipDirection {
    /// The side the flipped vertex leaves.
    pub fn own(self) -> Side {
        match self {
            FlipDirection::AToB => Side::A,
            FlipDirection::BToA => Side::B,
        }
    }
}

/// Up-elevator, turn vertex and down-elevator simulating one flip of `owner`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simulator {
    pub owner: usize,
    pub p: Vec<usize>,
    pub q: Vec<usize>,
    pub direction: FlipDirection,
    pub up: Elevator,
    pub turn: usize,
    pub down: Elevator,
}

impl Simulator {
    /// `w(top of up) + 1 < w(top of down)`.
    pub fn satisfies_top_level_margin(&self, builder: &GraphBuilder) -> bool {
        builder.weight(self.up.top()) + Rational::one() < *builder.weight(self.down.top())
    }

    /// All gadget vertices: up levels, turn, down levels.
    pub fn vertices(&self) -> Vec<usize> {
        let mut v = self.up.levels.clone();
        v.push(self.turn);
        v.extend(&self.down.levels);
        v
    }
}

/// Adds the simulator of `v` for the neighbor partition `(p, q)`, where `p`
/// lies across the cut from `v` and `q` on its side. The B-to-A variant swaps
/// sides and reverses every edge copy.
pub fn build_simulator(
    builder: &mut GraphBuilder,
    core: &CutCore,
    inst: &MaxCutInstance,
    v: usize,
    p: &[usize],
    q: &[usize],
    direction: FlipDirection,
    gadget: usize,
) -> Result<Simulator> {
    let nb = &core.neighbors[v];
    let mut pq: Vec<usize> = p.iter().chain(q).copied().collect();
    pq.sort_unstable();
    if pq != *nb {
        return Err(Error::Precondition(format!("({p:?}, {q:?}) does not partition the neighbors of {v}")));
    }
    let edge_sum = |side: &[usize]| -> Rational {
        side.iter().map(|&u| Rational::from_integer(inst.edge_weight(v, u).expect("edge").into())).sum()
    };
    let (far, near) = (edge_sum(p), edge_sum(q));
    if far >= near {
        return Err(Error::NotImproving { far: Box::new(far), near: Box::new(near) });
    }

    let own = direction.own();
    let other = own.other();
    let x = |r: usize, s: usize| match direction {
        FlipDirection::AToB => core.x(r, s),
        FlipDirection::BToA => core.x(s, r),
    };

    let mut m: Vec<usize> = Vec::new();
    for &pp in p {
        m.extend(core.triple(pp, own));
    }
    for &qq in q {
        m.extend(core.triple(qq, other));
    }

    let mut x_up: Vec<usize> = core.primes(v, own).to_vec();
    x_up.extend(p.iter().map(|&pp| x(v, pp)));
    builder.sort_in_order(&mut x_up);
    let mut ext_up = m.clone();
    ext_up.extend(core.triple(v, other));
    ext_up.extend(q.iter().map(|&qq| x(v, qq)));
    ext_up.extend(nb.iter().map(|&r| x(r, v)));

    let mut x_down: Vec<usize> = core.primes(v, other).to_vec();
    x_down.extend(q.iter().map(|&qq| x(qq, v)));
    builder.sort_in_order(&mut x_down);
    let mut ext_down = m.clone();
    ext_down.extend(core.triple(v, own));
    ext_down.extend(p.iter().map(|&pp| x(pp, v)));
    ext_down.extend(nb.iter().map(|&r| x(v, r)));

    let up = attach_elevator(builder, Direction::Up, &x_up, &ext_up, gadget)?;
    let down = attach_elevator(builder, Direction::Down, &x_down, &ext_down, gadget)?;
    let mut levels = up.levels.clone();
    levels.extend(&down.levels);
    builder.make_clique(&levels);

    let turn_weight = builder.weight(down.top()) + builder.weight(core.heavy(v, own)) - Rational::one();
    let turn = builder.add_vertex(turn_weight, Role::Turn { gadget });
    let mut n_pq = m;
    n_pq.extend(core.primes(v, Side::A));
    n_pq.extend(core.primes(v, Side::B));
    for &r in nb {
        n_pq.push(core.x(v, r));
        n_pq.push(core.x(r, v));
    }
    n_pq.extend(&levels);
    n_pq.push(core.heavy(v, Side::A));
    n_pq.push(core.heavy(v, Side::B));
    builder.connect_all(&[turn], &n_pq);

    Ok(Simulator { owner: v, p: p.to_vec(), q: q.to_vec(), direction, up, turn, down })
}
