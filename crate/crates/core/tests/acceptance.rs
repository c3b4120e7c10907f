//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any criterion fails.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pivotlab::gadgets::{attach_elevator, elevator_improving_step, elevator_level_weights, Direction, GraphBuilder, Role};
use pivotlab::problems::{Certifier, CircuitInstance, Gate, Graph, MaxCutInstance, SwopInstance};
use pivotlab::reductions::{
    reduce_maxcut_to_wis, reduce_mis_to_wis_pivot, reduce_swop_to_maxcircuit, MaxCutToWis, MisInstance,
    ReductionBundle, Tightness,
};
use pivotlab::solvers::{
    circuit_output_bounded_solve, pivot_search_bounded, potential, reduce_distinct_weights, standard_local_search,
    Outcome, DEFAULT_STEP_BUDGET,
};
use pivotlab::verify::{check_l_tight, check_tight_reduction};
use pivotlab::weights::{frank_tardos_reduce, verify_sign_preservation, DEFAULT_SIGN_BUDGET};
use pivotlab::{
    build_transition_graph, verify_improving_sequence, LocalSearchProblem, PivotRule, Rational, Solution,
    DEFAULT_SOLUTION_BUDGET,
};

type Verdict = Result<String, String>;

fn int(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

fn within(limit: Option<Duration>, elapsed: Duration) -> Result<(), String> {
    match limit {
        Some(l) if elapsed > l => Err(format!("took {elapsed:.2?}, limit {l:?}")),
        _ => Ok(()),
    }
}

// ---------------------------------------------------------------------------
// Max Cut sources: connected graphs on 2..=4 vertices, edge weights in
// {2n, 4n}, one representative per isomorphism class.

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &(a, b) in edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == u && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn maxcut_sources() -> Vec<MaxCutInstance> {
    let mut out = Vec::new();
    for n in 2..=4usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let perms = permutations(n);
        let mut seen: HashSet<Vec<(usize, usize, u64)>> = HashSet::new();
        for mask in 1u32..(1 << pairs.len()) {
            let edges: Vec<(usize, usize)> =
                pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
            if !connected(n, &edges) {
                continue;
            }
            for wmask in 0u32..(1 << edges.len()) {
                let weights: Vec<u64> =
                    (0..edges.len()).map(|i| if wmask >> i & 1 == 1 { 4 * n as u64 } else { 2 * n as u64 }).collect();
                let canon = perms
                    .iter()
                    .map(|p| {
                        let mut l: Vec<(usize, usize, u64)> = edges
                            .iter()
                            .zip(&weights)
                            .map(|(&(a, b), &w)| (p[a].min(p[b]), p[a].max(p[b]), w))
                            .collect();
                        l.sort_unstable();
                        l
                    })
                    .min()
                    .expect("at least one permutation");
                if seen.insert(canon) {
                    let g = Graph::new(n, edges.clone(), false).expect("simple graph");
                    out.push(MaxCutInstance::new(g, weights).expect("weights match edges"));
                }
            }
        }
    }
    out
}

fn describe(mc: &MaxCutInstance) -> String {
    let edges: Vec<String> =
        mc.graph().edges().iter().zip(mc.weights()).map(|(&(u, v), w)| format!("{u}{v}:{w}")).collect();
    format!("n={} [{}]", mc.vertex_count(), edges.join(" "))
}

/// Independent sets of the target graph, counted by branching on the lowest
/// remaining vertex. Stops once the count exceeds `cap`.
fn count_independent_sets(n: usize, edges: &[(usize, usize)], cap: u64) -> u64 {
    let words = n.div_ceil(64).max(1);
    let mut closed = vec![vec![0u64; words]; n];
    for v in 0..n {
        closed[v][v / 64] |= 1 << (v % 64);
    }
    for &(a, b) in edges {
        closed[a][b / 64] |= 1 << (b % 64);
        closed[b][a / 64] |= 1 << (a % 64);
    }
    fn rec(p: &mut Vec<u64>, closed: &[Vec<u64>], count: &mut u64, cap: u64) {
        if *count > cap {
            return;
        }
        let Some(w) = p.iter().position(|&x| x != 0) else {
            *count += 1;
            return;
        };
        let v = w * 64 + p[w].trailing_zeros() as usize;
        let saved = p.clone();
        p[w] &= !(1 << (v % 64));
        rec(p, closed, count, cap);
        for (x, c) in p.iter_mut().zip(&closed[v]) {
            *x &= !c;
        }
        rec(p, closed, count, cap);
        *p = saved;
    }
    let mut all = vec![0u64; words];
    for v in 0..n {
        all[v / 64] |= 1 << (v % 64);
    }
    let mut count = 0;
    rec(&mut all, &closed, &mut count, cap);
    count
}

// ---------------------------------------------------------------------------

fn criterion1() -> Verdict {
    let check = |direction, base: &[i64], want: &[i64]| -> Result<(), String> {
        let mut b = GraphBuilder::new();
        let xs: Vec<usize> = base.iter().map(|&w| b.add_vertex(int(w), Role::Named(format!("x{w}")))).collect();
        let e = attach_elevator(&mut b, direction, &xs, &[], 0).map_err(|e| e.to_string())?;
        let got: Vec<Rational> = e.levels.iter().map(|&l| b.weight(l).clone()).collect();
        let want: Vec<Rational> = want.iter().map(|&w| int(w)).collect();
        let direct = elevator_level_weights(direction, &base.iter().map(|&w| int(w)).collect::<Vec<_>>())
            .map_err(|e| e.to_string())?;
        if got != want || direct != want {
            return Err(format!("{direction:?} over {base:?}: got {got:?}, want {want:?}"));
        }
        Ok(())
    };
    check(Direction::Up, &[2, 5, 9, 1], &[8, 18, 20])?;
    check(Direction::Down, &[3, 4, 2, 9], &[6, 7, 15])?;
    Ok("up (2,5,9,1) -> (8,18,20), down (3,4,2,9) -> (6,7,15)".into())
}

fn criterion2() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut steps = 0u64;
    for trial in 0..1000 {
        let size = rng.gen_range(2..=8usize);
        let base_w: Vec<i64> = (0..size).map(|_| rng.gen_range(0..=100)).collect();
        let mut b = GraphBuilder::new();
        let xs: Vec<usize> =
            base_w.iter().enumerate().map(|(i, &w)| b.add_vertex(int(w), Role::Named(format!("x{i}")))).collect();
        let ext_count = rng.gen_range(0..=2usize);
        let ext: Vec<usize> = (0..ext_count).map(|i| b.add_vertex(int(1), Role::Named(format!("e{i}")))).collect();
        let elev = attach_elevator(&mut b, Direction::Up, &xs, &ext, 0).map_err(|e| e.to_string())?;
        let inst = b.to_wis(3).map_err(|e| e.to_string())?;
        let n = b.vertex_count();
        for i in 0..elev.levels.len().saturating_sub(1) {
            // Level i together with every base vertex it does not see.
            let s = Solution::from_indices(n, std::iter::once(elev.levels[i]).chain(xs[i + 2..].iter().copied()));
            if inst.certify(&s).is_err() {
                return Err(format!("trial {trial}: state at level {i} is not independent"));
            }
            let t = elevator_improving_step(&inst, &elev, &s, i).map_err(|e| format!("trial {trial}: {e}"))?;
            if inst.certify(&t).is_err() {
                return Err(format!("trial {trial}: step from level {i} leaves the independent sets"));
            }
            if inst.objective(&t) <= inst.objective(&s) || s.distance(&t) > 3 {
                return Err(format!("trial {trial}: step from level {i} is not an improving 3-swap"));
            }
            steps += 1;
        }
    }
    Ok(format!("1000 elevators, {steps} level steps"))
}

fn criterion3(reductions: &[(MaxCutInstance, MaxCutToWis)]) -> Verdict {
    let mut checked = 0;
    for (mc, red) in reductions {
        let b = red.builder();
        for (i, sim) in red.simulators().iter().enumerate() {
            // Closed form: the top level weighs the base sum plus |X| - 1 margins.
            let top = |e: &pivotlab::gadgets::Elevator, margin: i64| -> Rational {
                e.base.iter().map(|&x| b.weight(x).clone()).sum::<Rational>() + int(margin * (e.base.len() as i64 - 1))
            };
            let up = top(&sim.up, 1);
            let down = top(&sim.down, -1);
            if up != *b.weight(sim.up.top()) || down != *b.weight(sim.down.top()) {
                return Err(format!("{}: simulator {i} level weights disagree with the closed form", describe(mc)));
            }
            if up + int(1) >= down {
                return Err(format!("{}: simulator {i} violates the margin", describe(mc)));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} simulators over {} sources", reductions.len()))
}

fn criterion4(reductions: &[(MaxCutInstance, MaxCutToWis)]) -> Verdict {
    let cap = 1u64 << 22;
    let mut max_count = 0;
    let mut explored = 0;
    for (mc, red) in reductions {
        let wis = red.wis();
        let count = count_independent_sets(wis.ground_size(), wis.graph().edges(), cap);
        if count > cap {
            return Err(format!("{}: more than 2^22 target solutions", describe(mc)));
        }
        max_count = max_count.max(count);
        let report = check_tight_reduction(red, DEFAULT_SOLUTION_BUDGET).map_err(|e| format!("{}: {e}", describe(mc)))?;
        if !report.passed() {
            return Err(format!(
                "{}: condition 1 {}, condition 2 {}, condition 3 {}",
                describe(mc),
                report.condition1,
                report.condition2,
                report.condition3
            ));
        }
        explored += report.nodes_explored;
    }
    Ok(format!(
        "{} sources, largest target has {max_count} independent sets, {explored} search nodes",
        reductions.len()
    ))
}

fn criterion5(reductions: &[(MaxCutInstance, MaxCutToWis)]) -> Verdict {
    let mut flips = 0;
    for (mc, red) in reductions {
        let n = mc.vertex_count();
        for mask in 0u64..(1 << n) {
            let part = Solution::from_indices(n, (0..n).filter(|&i| mask >> i & 1 == 1));
            for v in 0..n {
                if !mc.flip_improves(&part, v) {
                    continue;
                }
                let tag = format!("{} partition {part} vertex {v}", describe(mc));
                let seq = red.direct_sequence(&part, v).map_err(|e| format!("{tag}: {e}"))?;
                let want = mc.graph().degree(v) + 4;
                if seq.moves() != want {
                    return Err(format!("{tag}: {} moves, want {want}", seq.moves()));
                }
                verify_improving_sequence(red.wis(), &seq, false).map_err(|e| format!("{tag}: {e}"))?;
                let flipped = part.flipped(v);
                if seq.first() != Some(&red.g(&part)) || seq.last() != Some(&red.g(&flipped)) {
                    return Err(format!("{tag}: endpoints are not g(A,B) and g(A',B')"));
                }
                if !red.r_member(seq.last().expect("nonempty")) {
                    return Err(format!("{tag}: sequence ends outside R"));
                }
                flips += 1;
            }
        }
    }
    Ok(format!("{flips} improving flips"))
}

fn criterion6() -> Verdict {
    let values = [-2i64, -1, 1, 2];
    let mut instances = 0;
    let mut strings = 0;
    for n in 1..=3usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        for certifier in [Certifier::IndependentSet, Certifier::AllSubsets] {
            let graphs: Vec<Graph> = if certifier == Certifier::AllSubsets {
                vec![Graph::empty(n)]
            } else {
                (0u32..(1 << pairs.len()))
                    .map(|m| {
                        let e = pairs.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &e)| e).collect();
                        Graph::new(n, e, false).expect("simple graph")
                    })
                    .collect()
            };
            for graph in &graphs {
                for code in 0..values.len().pow(n as u32) {
                    let w: Vec<Rational> = (0..n).map(|i| int(values[code / values.len().pow(i as u32) % values.len()])).collect();
                    for c in 1..=2usize {
                        let inst = SwopInstance::vertex_weighted(graph.clone(), w.clone(), certifier.clone(), c)
                            .map_err(|e| e.to_string())?;
                        let tag = format!("{} n={n} c={c} w={w:?} edges={:?}", certifier.name(), graph.edges());
                        let red = reduce_swop_to_maxcircuit(&inst).map_err(|e| format!("{tag}: {e}"))?;
                        let tg = build_transition_graph(red.circuit(), DEFAULT_SOLUTION_BUDGET).map_err(|e| e.to_string())?;
                        let sinks: BTreeSet<Solution> = tg.sinks().iter().map(|&i| tg.node(i).clone()).collect();
                        let mut expected = BTreeSet::new();
                        inst.for_each_solution(&mut |u| {
                            if !inst.has_improving_neighbor(u) {
                                expected.insert(red.uu00(u));
                            }
                            std::ops::ControlFlow::Continue(())
                        });
                        if sinks != expected {
                            return Err(format!("{tag}: sinks {sinks:?}, want {expected:?}"));
                        }
                        if let Some(s) = sinks.iter().find(|s| !red.r_member(s)) {
                            return Err(format!("{tag}: unstructured sink {s}"));
                        }
                        let ell = 4 * c + 4;
                        let Tightness::Bounded { metric, .. } = red.tightness() else {
                            return Err(format!("{tag}: bundle does not declare a distance bound"));
                        };
                        let report = check_l_tight(&red, ell, metric, DEFAULT_SOLUTION_BUDGET).map_err(|e| format!("{tag}: {e}"))?;
                        if !report.passed() {
                            return Err(format!("{tag}: {}", report.outcome));
                        }
                        instances += 1;
                        strings += tg.len();
                    }
                }
            }
        }
    }
    Ok(format!("{instances} instances, {strings} target strings"))
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    if rng.gen_bool(0.1) {
        return Rational::zero();
    }
    Rational::new(rng.gen_range(-1000i64..=1000).into(), rng.gen_range(1i64..=1000).into())
}

fn criterion7() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut vectors = 0u64;
    for trial in 0..200 {
        let k = rng.gen_range(1..=3usize);
        let n = rng.gen_range(2..=4u64);
        let w: Vec<Rational> = (0..k).map(|_| random_rational(&mut rng)).collect();
        let tag = format!("trial {trial}: w={w:?} N={n}");
        let reduced = frank_tardos_reduce(&w, n).map_err(|e| format!("{tag}: {e}"))?;
        let check = verify_sign_preservation(&w, &reduced.entries, n, DEFAULT_SIGN_BUDGET).map_err(|e| format!("{tag}: {e}"))?;
        if let Some(b) = check.counterexample {
            return Err(format!("{tag}: sign differs on {b:?}"));
        }
        let bound = num_traits::pow(BigInt::from(2), 4 * k * k * k) * num_traits::pow(BigInt::from(n), k * (k + 2));
        if reduced.entries.iter().any(|x| x.abs() > bound) {
            return Err(format!("{tag}: {:?} exceeds the norm bound", reduced.entries));
        }
        vectors += check.checked;
    }
    Ok(format!("200 vectors, {vectors} sign comparisons"))
}

fn random_swop(rng: &mut ChaCha8Rng, max_ground: usize, distinct: &[Rational]) -> SwopInstance {
    let n = rng.gen_range(1..=max_ground);
    let edges: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(0.3)).collect();
    let graph = Graph::new(n, edges, false).expect("simple graph");
    let certifier = match rng.gen_range(0..4) {
        0 => Certifier::IndependentSet,
        1 => Certifier::AllSubsets,
        2 => Certifier::Clique,
        _ => Certifier::VertexCover,
    };
    let w: Vec<Rational> = (0..n).map(|_| distinct[rng.gen_range(0..distinct.len())].clone()).collect();
    SwopInstance::vertex_weighted(graph, w, certifier, rng.gen_range(1..=3)).expect("valid instance")
}

fn edge_set(tg: &pivotlab::TransitionGraph) -> BTreeSet<(Solution, Solution)> {
    tg.edges().map(|(a, b)| (tg.node(a).clone(), tg.node(b).clone())).collect()
}

fn criterion8() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut edges = 0;
    for trial in 0..300 {
        let k = rng.gen_range(1..=3usize);
        let distinct: Vec<Rational> = (0..k).map(|_| random_rational(&mut rng)).collect();
        let inst = random_swop(&mut rng, 12, &distinct);
        let tag = format!("trial {trial}: {} n={} c={} w={:?}", inst.certifier().name(), inst.ground_size(), inst.swap_bound(), inst.ground_weights());
        let red = reduce_distinct_weights(&inst).map_err(|e| format!("{tag}: {e}"))?;
        let a = build_transition_graph(&inst, DEFAULT_SOLUTION_BUDGET).map_err(|e| e.to_string())?;
        let b = build_transition_graph(&red.instance, DEFAULT_SOLUTION_BUDGET).map_err(|e| e.to_string())?;
        if a.nodes() != b.nodes() {
            return Err(format!("{tag}: node sets differ"));
        }
        let (ea, eb) = (edge_set(&a), edge_set(&b));
        if ea != eb {
            return Err(format!("{tag}: edge sets differ ({} vs {})", ea.len(), eb.len()));
        }
        edges += ea.len();
    }
    Ok(format!("300 instances, {edges} transition edges compared"))
}

fn reachable(inst: &dyn LocalSearchProblem, start: &Solution) -> Vec<Solution> {
    let mut seen: HashSet<Solution> = HashSet::from([start.clone()]);
    let mut order = vec![start.clone()];
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(cur) = queue.pop_front() {
        for t in inst.improving_neighbors(&cur) {
            if seen.insert(t.clone()) {
                order.push(t.clone());
                queue.push_back(t);
            }
        }
    }
    order
}

fn mis(n: usize, classes: &[&[usize]], cross: &[(usize, usize)]) -> MisInstance {
    let mut edges: Vec<(usize, usize)> = cross.to_vec();
    for class in classes {
        for (i, &u) in class.iter().enumerate() {
            for &v in &class[i + 1..] {
                edges.push((u, v));
            }
        }
    }
    let g = Graph::new(n, edges, false).expect("simple graph");
    MisInstance::new(g, classes.iter().map(|c| c.to_vec()).collect()).expect("valid instance")
}

fn has_multicolored_set(m: &MisInstance) -> bool {
    let classes = m.classes();
    let mut pick = vec![0usize; classes.len()];
    loop {
        let set: Vec<usize> = pick.iter().zip(classes).map(|(&i, c)| c[i]).collect();
        if m.is_multicolored_independent(&set) {
            return true;
        }
        let mut i = 0;
        while i < pick.len() && pick[i] + 1 == classes[i].len() {
            pick[i] = 0;
            i += 1;
        }
        if i == pick.len() {
            return false;
        }
        pick[i] += 1;
    }
}

fn criterion9() -> Verdict {
    let seed_graph = Graph::path(3);
    let seed_w = vec![int(1), int(3), int(1)];
    let seed_start = Solution::parse("101").expect("bits");
    let v1: &[usize] = &[0, 1];
    let v2: &[usize] = &[2, 3];
    let v3: &[usize] = &[4];
    let yes = [
        mis(5, &[v1, v2, v3], &[]),
        mis(5, &[v1, v2, v3], &[(0, 2), (1, 4)]),
        mis(5, &[v1, v2, v3], &[(0, 2), (1, 3), (0, 4)]),
        mis(4, &[&[0, 1], &[2], &[3]], &[(0, 2)]),
    ];
    let no = [
        mis(5, &[v1, v2, v3], &[(0, 4), (1, 4)]),
        mis(5, &[v1, v2, v3], &[(0, 2), (0, 3), (1, 4)]),
        mis(5, &[v1, v2, v3], &[(1, 2), (1, 3), (0, 4)]),
        mis(4, &[&[0, 1], &[2], &[3]], &[(0, 2), (1, 3)]),
    ];
    let k = 3;
    for (i, m) in yes.iter().chain(&no).enumerate() {
        let is_yes = i < yes.len();
        if has_multicolored_set(m) != is_yes {
            return Err(format!("instance {i} is labelled wrongly"));
        }
        let red = reduce_mis_to_wis_pivot(m, &seed_graph, &seed_w, &seed_start).map_err(|e| format!("instance {i}: {e}"))?;
        let target = &red.target;
        let states = reachable(target, &red.start);
        for t in &states {
            let part = red.mis_part(t);
            if m.is_multicolored_independent(&part) && target.has_improving_neighbor(t) {
                return Err(format!("instance {i}: {t} holds a multicolored set but can still improve"));
            }
        }
        if is_yes {
            let report = pivot_search_bounded(target, &red.start, k).map_err(|e| format!("instance {i}: {e}"))?;
            if report.outcome != Outcome::LocalOptimumFound || report.steps() > k {
                return Err(format!("instance {i}: no maximal sequence of length at most {k}"));
            }
            verify_improving_sequence(target, &report.sequence, true).map_err(|e| format!("instance {i}: {e}"))?;
        } else {
            // Every sink reachable from T must be cut off once S ∪ {w*} is removed.
            let gate = red.seed_with_w_star();
            if !states.contains(&gate) {
                return Err(format!("instance {i}: S ∪ {{w*}} is unreachable"));
            }
            let mut seen: HashSet<Solution> = HashSet::from([red.start.clone()]);
            let mut stack = vec![red.start.clone()];
            while let Some(cur) = stack.pop() {
                let next = target.improving_neighbors(&cur);
                if next.is_empty() {
                    return Err(format!("instance {i}: sink {cur} is reachable without passing S ∪ {{w*}}"));
                }
                for t in next {
                    if t != gate && seen.insert(t.clone()) {
                        stack.push(t);
                    }
                }
            }
        }
    }
    Ok(format!("{} yes and {} no instances", yes.len(), no.len()))
}

fn rules(seed: u64) -> [PivotRule; 3] {
    [PivotRule::FirstImprovement, PivotRule::BestImprovement, PivotRule::Random { seed }]
}

fn criterion10() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut longest = 0;
    for trial in 0..100 {
        let n = rng.gen_range(1..=10usize);
        let edges: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|_| rng.gen_bool(0.3)).collect();
        let graph = Graph::new(n, edges, false).expect("simple graph");
        let certifier = match rng.gen_range(0..3) {
            0 => Certifier::IndependentSet,
            1 => Certifier::AllSubsets,
            _ => Certifier::Clique,
        };
        let w: Vec<Rational> = (0..n).map(|_| Rational::new(rng.gen_range(1i64..=50).into(), rng.gen_range(1i64..=5).into())).collect();
        let inst = SwopInstance::vertex_weighted(graph, w, certifier, 2).map_err(|e| e.to_string())?;
        let mut valid = Vec::new();
        inst.for_each_solution(&mut |s| {
            valid.push(s.clone());
            std::ops::ControlFlow::Continue(())
        });
        let start = valid[rng.gen_range(0..valid.len())].clone();
        for rule in rules(trial) {
            let tag = format!("trial {trial} {rule:?}");
            let report = standard_local_search(&inst, &start, rule, DEFAULT_STEP_BUDGET).map_err(|e| format!("{tag}: {e}"))?;
            if report.steps() > n * n {
                return Err(format!("{tag}: {} steps exceed n^2 = {}", report.steps(), n * n));
            }
            let pots: Vec<usize> = report.sequence.steps().iter().map(|s| potential(&inst, s)).collect();
            if pots.windows(2).any(|p| p[1] <= p[0]) {
                return Err(format!("{tag}: potential does not increase: {pots:?}"));
            }
            longest = longest.max(report.steps());
        }
    }
    Ok(format!("300 runs, longest {longest} steps"))
}

fn random_circuit(rng: &mut ChaCha8Rng) -> CircuitInstance {
    let inputs = rng.gen_range(1..=6usize);
    let mut gates: Vec<Gate> = (0..inputs).map(Gate::Input).collect();
    for _ in 0..rng.gen_range(0..=12) {
        let len = gates.len();
        let pick = |rng: &mut ChaCha8Rng| rng.gen_range(0..len);
        let g = match rng.gen_range(0..4) {
            0 => Gate::Not(pick(rng)),
            1 => Gate::And((0..rng.gen_range(1..=3)).map(|_| pick(rng)).collect()),
            2 => Gate::Or((0..rng.gen_range(1..=3)).map(|_| pick(rng)).collect()),
            _ => Gate::Const(rng.gen_bool(0.5)),
        };
        gates.push(g);
    }
    let m = rng.gen_range(1..=6usize);
    let outputs: Vec<usize> = (0..m).map(|_| rng.gen_range(0..gates.len())).collect();
    let weights: Vec<Rational> = (0..m)
        .map(|_| Rational::new(rng.gen_range(-20i64..=20).into(), rng.gen_range(1i64..=4).into()))
        .collect();
    CircuitInstance::new(gates, inputs, outputs, weights).expect("valid circuit")
}

fn criterion11() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut longest = 0;
    for trial in 0..1000 {
        let circuit = random_circuit(&mut rng);
        let start = Solution::from_indices(
            circuit.input_count(),
            (0..circuit.input_count()).filter(|_| rng.gen_bool(0.5)).collect::<Vec<_>>(),
        );
        let rule = rules(trial)[trial as usize % 3];
        let m = circuit.outputs().len();
        let report = circuit_output_bounded_solve(&circuit, &start, rule).map_err(|e| format!("trial {trial}: {e}"))?;
        if report.steps() as u64 > 1u64 << m {
            return Err(format!("trial {trial}: {} steps exceed 2^{m}", report.steps()));
        }
        if report.outcome != Outcome::LocalOptimumFound {
            return Err(format!("trial {trial}: ended with {}", report.outcome.name()));
        }
        longest = longest.max(report.steps());
    }
    Ok(format!("1000 circuits, longest {longest} steps"))
}

fn main() {
    let t = Instant::now();
    let sources = maxcut_sources();
    let reductions: Result<Vec<(MaxCutInstance, MaxCutToWis)>, String> = sources
        .into_iter()
        .map(|mc| reduce_maxcut_to_wis(&mc).map(|r| (mc.clone(), r)).map_err(|e| format!("{}: {e}", describe(&mc))))
        .collect();
    let setup = t.elapsed();

    let secs = |s| Some(Duration::from_secs(s));
    let criteria: Vec<(usize, Option<Duration>, Box<dyn Fn() -> Verdict + '_>)> = vec![
        (1, secs(1), Box::new(criterion1)),
        (2, secs(10), Box::new(criterion2)),
        (3, None, Box::new(|| criterion3(reductions.as_ref().map_err(Clone::clone)?))),
        (4, None, Box::new(|| criterion4(reductions.as_ref().map_err(Clone::clone)?))),
        (5, None, Box::new(|| criterion5(reductions.as_ref().map_err(Clone::clone)?))),
        (6, secs(60), Box::new(criterion6)),
        (7, secs(60), Box::new(criterion7)),
        (8, None, Box::new(criterion8)),
        (9, None, Box::new(criterion9)),
        (10, None, Box::new(criterion10)),
        (11, None, Box::new(criterion11)),
    ];
    println!("max cut sweep: built reductions in {setup:.2?}");
    let mut failed = 0;
    for (id, limit, run) in criteria {
        let t = Instant::now();
        let verdict = run();
        let elapsed = t.elapsed();
        let verdict = verdict.and_then(|msg| within(limit, elapsed).map(|_| msg));
        match verdict {
            Ok(msg) => println!("criterion {id:>2}: PASS  {msg} ({elapsed:.2?})"),
            Err(msg) => {
                failed += 1;
                println!("criterion {id:>2}: FAIL  {msg} ({elapsed:.2?})");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
