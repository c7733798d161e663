//! Random sequences of local moves, checked against canonical forms.
//!
//! Every move is an equivalence up to a known sign, so the canonical form after
//! a sequence must equal the starting one times the accumulated sign. Arc moves
//! must also keep the homotopy class.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::diagram::{enumerate_structures, Canonical, CanonicalDiagram, OpenJacobiDiagram, Vertex};
use crate::freegroup::{Letter, Word};
use crate::handlebody::{ArcDiagram, ArcItem, RawArcDiagram};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub seed: u64,
    pub sequences: usize,
    pub moves: usize,
    pub mismatches: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_mismatch: Option<String>,
}

impl FuzzReport {
    pub fn pass(&self) -> bool {
        self.mismatches == 0
    }
}

fn random_word(rng: &mut impl Rng, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word::from_letters((0..len).map(|_| Letter::new(rng.gen_range(1..=2), rng.gen_bool(0.5))))
}

fn with_random_beads(rng: &mut impl Rng, d: &OpenJacobiDiagram) -> OpenJacobiDiagram {
    (0..d.edges().len()).fold(d.clone(), |acc, e| acc.with_edge_beads(e, vec![random_word(rng, 2)]))
}

fn tri_vertices(d: &OpenJacobiDiagram) -> Vec<usize> {
    (0..d.vertices().len()).filter(|&v| d.vertices()[v] == Vertex::Tri).collect()
}

/// One random equivalence move on an open diagram; returns the sign it costs.
fn open_move(rng: &mut impl Rng, d: &mut OpenJacobiDiagram) -> i8 {
    let tri = tri_vertices(d);
    let ne = d.edges().len();
    match rng.gen_range(0..7) {
        0 if !tri.is_empty() => {
            let v = *tri.choose(rng).expect("nonempty");
            *d = d.gauge_at_vertex(v, &random_word(rng, 2)).expect("trivalent");
        }
        1 if ne > 0 => *d = d.reverse_edge(rng.gen_range(0..ne)),
        2 if !tri.is_empty() => {
            *d = d.as_swap(*tri.choose(rng).expect("nonempty")).expect("trivalent");
            return -1;
        }
        3 if !tri.is_empty() => *d = d.rotate_slots(*tri.choose(rng).expect("nonempty")).expect("trivalent"),
        4 => {
            let mut perm: Vec<usize> = (0..d.vertices().len()).collect();
            perm.shuffle(rng);
            *d = d.renumber_vertices(&perm).expect("permutation");
        }
        5 => {
            let mut perm: Vec<usize> = (0..ne).collect();
            perm.shuffle(rng);
            *d = d.permute_edges(&perm).expect("permutation");
        }
        6 if ne > 0 => {
            // Split an edge's holonomy into random factors, identities included.
            let e = rng.gen_range(0..ne);
            let h = d.edges()[e].holonomy();
            let u = random_word(rng, 2);
            let beads = match rng.gen_range(0..3) {
                0 => vec![u.clone(), u.inv().mul(&h)],
                1 => vec![Word::identity(), h, Word::identity()],
                _ => vec![h.mul(&u), u.inv()],
            };
            *d = d.with_edge_beads(e, beads);
        }
        _ => {}
    }
    1
}

fn same_up_to(sign: i8, before: &Canonical, after: &Canonical) -> bool {
    match (before, after) {
        (Canonical::Zero, Canonical::Zero) => true,
        (Canonical::Nonzero { diagram: a, sign: sa }, Canonical::Nonzero { diagram: b, sign: sb }) => a == b && sa * sign == *sb,
        _ => false,
    }
}

fn structure_pool() -> Vec<CanonicalDiagram> {
    (1..=3).flat_map(|d| (0..=2 * d).flat_map(move |m| enumerate_structures(d, m))).collect()
}

/// One random move on an arc diagram; returns the sign it costs.
fn arc_move(rng: &mut impl Rng, raw: &mut RawArcDiagram) -> i8 {
    let mut arcs = raw.arcs().to_vec();
    let mut jacobi = raw.jacobi().clone();
    let mut sign = 1;
    let a = rng.gen_range(0..arcs.len());
    let len = arcs[a].len();
    match rng.gen_range(0..5) {
        0 if len > 0 => {
            let p = rng.gen_range(0..len);
            if let ArcItem::Bead(w) = arcs[a][p].clone() {
                let u = random_word(rng, 2);
                arcs[a].splice(p..=p, [ArcItem::Bead(u.clone()), ArcItem::Bead(u.inv().mul(&w))]);
            }
        }
        1 => {
            let p = rng.gen_range(0..=len);
            arcs[a].insert(p, ArcItem::Bead(Word::identity()));
        }
        2 if len > 1 => {
            // Commute a bead with the leg next to it, compensating on the leg.
            let p = rng.gen_range(0..len - 1);
            match (arcs[a][p].clone(), arcs[a][p + 1].clone()) {
                (ArcItem::Bead(w), ArcItem::Leg(l)) => {
                    jacobi = jacobi.gauge_any(jacobi.leg_vertex(l), &w.inv());
                    arcs[a].swap(p, p + 1);
                }
                (ArcItem::Leg(l), ArcItem::Bead(w)) => {
                    jacobi = jacobi.gauge_any(jacobi.leg_vertex(l), &w);
                    arcs[a].swap(p, p + 1);
                }
                _ => {}
            }
        }
        _ => sign = open_move(rng, &mut jacobi),
    }
    *raw = RawArcDiagram::new(arcs, jacobi).expect("moves keep legs attached");
    sign
}

fn arc_canonical(raw: &RawArcDiagram) -> Option<(crate::handlebody::CanonicalArcDiagram, i8)> {
    raw.normalize().canonicalize()
}

/// Runs `sequences` random move sequences, alternating open and arc diagrams.
pub fn fuzz_moves(seed: u64, sequences: usize) -> FuzzReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = structure_pool();
    let mut report = FuzzReport { seed, sequences, moves: 0, mismatches: 0, first_mismatch: None };
    for s in 0..sequences {
        let structure = pool.choose(&mut rng).expect("nonempty pool").to_diagram();
        let base = with_random_beads(&mut rng, &structure);
        let steps = rng.gen_range(1..=12);
        report.moves += steps;
        let failure = if s % 2 == 0 {
            let before = base.canonicalize();
            let mut d = base.clone();
            let mut sign = 1i8;
            for _ in 0..steps {
                sign *= open_move(&mut rng, &mut d);
            }
            (!same_up_to(sign, &before, &d.canonicalize())).then(|| format!("open diagram {base:?} after {steps} moves"))
        } else {
            let m = rng.gen_range(1..=3);
            let mut legs = vec![0usize; m];
            for _ in 0..base.num_legs() {
                legs[rng.gen_range(0..m)] += 1;
            }
            let holonomies = (0..m).map(|_| random_word(&mut rng, 2)).collect();
            let mut raw = ArcDiagram::new(holonomies, legs, base.clone()).expect("leg count").to_raw();
            let class = raw.homotopy_class();
            let before = arc_canonical(&raw);
            let mut sign = 1i8;
            for _ in 0..steps {
                sign *= arc_move(&mut rng, &mut raw);
            }
            let after = arc_canonical(&raw);
            let agree = match (&before, &after) {
                (None, None) => true,
                (Some((a, sa)), Some((b, sb))) => a == b && sa * sign == *sb,
                _ => false,
            };
            (!agree || raw.homotopy_class() != class).then(|| format!("arc diagram on {m} arcs from {base:?} after {steps} moves"))
        };
        if let Some(f) = failure {
            report.mismatches += 1;
            report.first_mismatch.get_or_insert(f);
        }
    }
    report
}
