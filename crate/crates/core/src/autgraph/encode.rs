use super::{ColoredDigraph, FIBER, NONE};
use crate::error::{Error, Result};
use crate::exactalg::ConjRing;
use crate::hadamard::SignMatrix;
use crate::sic::SicSystem;

/// Which equivalence a matrix graph encodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MatrixMode {
    /// One permutation for rows and columns.
    Strong,
    /// Independent row and column permutations.
    Weak,
}

fn sign_color(s: i8) -> u8 {
    if s > 0 {
        0
    } else {
        2
    }
}

/// Graph on `{+1, -1} x [d]` (strong) or `{+1, -1} x (rows u cols)` (weak)
/// whose edge from `(s, i)` to `(t, j)` is colored `s t M_ij`.
///
/// Vertex numbering: strong `(s, i) -> s_idx * d + i`; weak rows
/// `s_idx * d + i` and columns `2d + t_idx * d + j`, where `s_idx` is 0 for
/// `+1`. Fiber `i` is `{(+1, i), (-1, i)}`; in weak mode column fibers are
/// numbered `d + j`.
pub fn encode_phased_matrix_graph(m: &SignMatrix, mode: MatrixMode) -> Result<ColoredDigraph> {
    let d = m.order();
    let sign = |idx: usize| if idx == 0 { 1i8 } else { -1 };
    match mode {
        MatrixMode::Strong => {
            let n = 2 * d;
            let mut edges = vec![NONE; n * n];
            for a in 0..n {
                let (s, i) = (sign(a / d), a % d);
                for b in 0..n {
                    let (t, j) = (sign(b / d), b % d);
                    edges[a * n + b] = if a == b {
                        NONE
                    } else if i == j {
                        FIBER
                    } else {
                        sign_color(s * t * m.get(i, j))
                    };
                }
            }
            // the loop value s*s*M_ii = M_ii becomes the vertex color
            let vertex_color = (0..n).map(|a| (m.get(a % d, a % d) < 0) as u32).collect();
            let fibers = (0..d).map(|i| vec![i, d + i]).collect();
            ColoredDigraph::new(vertex_color, edges, fibers)
        }
        MatrixMode::Weak => {
            let n = 4 * d;
            let mut edges = vec![NONE; n * n];
            let row = |s_idx: usize, i: usize| s_idx * d + i;
            let col = |t_idx: usize, j: usize| 2 * d + t_idx * d + j;
            for i in 0..d {
                for s_idx in 0..2 {
                    let (r0, c0) = (row(s_idx, i), col(s_idx, i));
                    let (r1, c1) = (row(1 - s_idx, i), col(1 - s_idx, i));
                    edges[r0 * n + r1] = FIBER;
                    edges[c0 * n + c1] = FIBER;
                }
            }
            for i in 0..d {
                for j in 0..d {
                    for s_idx in 0..2 {
                        for t_idx in 0..2 {
                            let c = sign_color(sign(s_idx) * sign(t_idx) * m.get(i, j));
                            let (r, k) = (row(s_idx, i), col(t_idx, j));
                            edges[r * n + k] = c;
                            edges[k * n + r] = c;
                        }
                    }
                }
            }
            let vertex_color = (0..n).map(|v| (v >= 2 * d) as u32).collect();
            let mut fibers: Vec<Vec<usize>> = (0..d).map(|i| vec![row(0, i), row(1, i)]).collect();
            fibers.extend((0..d).map(|j| vec![col(0, j), col(1, j)]));
            ColoredDigraph::new(vertex_color, edges, fibers)
        }
    }
}

/// Exponent `k` with `value = 4 i^k`, if any.
fn phase_of_four<R: ConjRing>(ring: &R, value: &R::Elem) -> Option<u8> {
    let four = ring.from_int(4);
    (0..4u8).find(|&k| ring.mul(&four, &ring.i_pow(k as i64)) == *value)
}

/// Graph on `C4 x X` (`C4 = (1, i, -1, -i)`, vertex `a * d^2 + u` for
/// `alpha = i^a`) whose edge `(alpha, u) -> (beta, v)`, `u != v`, carries the
/// phase `omega` of `(alpha x_u, beta x_v) = 4 omega`. Fiber `u` is `C4 x {u}`.
pub fn encode_sic_graph<R: ConjRing>(s: &SicSystem<R>) -> Result<ColoredDigraph> {
    let ring = s.ring();
    // within a fiber the products are 12 * conj(alpha) * beta; none may look like 4*omega
    let twelve = ring.from_int(12);
    for k in 0..4 {
        let v = ring.mul(&twelve, &ring.i_pow(k));
        if phase_of_four(ring, &v).is_some() {
            return Err(Error::Internal(format!(
                "12 i^{k} collides with a phase color in {}",
                ring.spec()
            )));
        }
    }
    let nx = s.len();
    let gram = s.gram();
    let mut base = vec![0u8; nx * nx];
    for u in 0..nx {
        for v in 0..nx {
            if u == v {
                continue;
            }
            base[u * nx + v] = phase_of_four(ring, &gram[u * nx + v]).ok_or_else(|| {
                Error::Precondition(format!(
                    "(x_{u}, x_{v}) = {} is not of the form 4 i^k",
                    ring.format(&gram[u * nx + v])
                ))
            })?;
        }
    }
    let n = 4 * nx;
    let mut edges = vec![NONE; n * n];
    for a in 0..4 {
        for u in 0..nx {
            let row = (a * nx + u) * n;
            for b in 0..4 {
                for v in 0..nx {
                    let c = if u == v {
                        if a == b {
                            NONE
                        } else {
                            FIBER
                        }
                    } else {
                        // conj(i^a) i^b i^e
                        ((b + 4 - a) as u8 + base[u * nx + v]) % 4
                    };
                    edges[row + b * nx + v] = c;
                }
            }
        }
    }
    let fibers = (0..nx).map(|u| (0..4).map(|a| a * nx + u).collect()).collect();
    ColoredDigraph::new(vec![0; n], edges, fibers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autgraph::{graph_automorphisms, project_fiber, DEFAULT_BUDGET};
    use crate::exactalg::{inner, Fp2};
    use crate::hadamard::sylvester;
    use crate::permgroup::PermGroup;
    use crate::sic::construct_sic;
    use num_bigint::BigUint;

    fn projected_order(m: &SignMatrix, mode: MatrixMode) -> BigUint {
        let g = encode_phased_matrix_graph(m, mode).unwrap();
        let aut = graph_automorphisms(&g, DEFAULT_BUDGET).unwrap();
        let gens: Vec<_> = aut
            .group
            .generators()
            .iter()
            .map(|x| project_fiber(x, &g).unwrap())
            .collect();
        PermGroup::from_generators(g.fibers().len(), &gens).unwrap().order()
    }

    #[test]
    fn small_matrix_groups() {
        let h1 = sylvester(1, 256).unwrap();
        let h2 = SignMatrix::parse("++\n-+").unwrap();
        assert_eq!(projected_order(&h1, MatrixMode::Strong), BigUint::from(1u32));
        assert_eq!(projected_order(&h2, MatrixMode::Strong), BigUint::from(2u32));
        assert_eq!(projected_order(&h1, MatrixMode::Weak), BigUint::from(4u32));
    }

    #[test]
    fn sic_graph_colors_match_direct_inner_products() {
        let f = Fp2::new(3).unwrap();
        let s = construct_sic(&sylvester(1, 256).unwrap(), f).unwrap();
        let g = encode_sic_graph(&s).unwrap();
        assert_eq!(g.n(), 16);
        // (1, x_11) -> (1, x_21): (x_11, x_21) = 4, phase +1
        assert_eq!(g.edge(s.index(0, 0), s.index(1, 0)), 0);
        let nx = s.len();
        for a in 0..4 {
            for b in 0..4 {
                for u in 0..nx {
                    for v in 0..nx {
                        if u == v {
                            continue;
                        }
                        let xa: Vec<_> = s.vectors()[u].iter().map(|e| f.mul(&f.i_pow(a as i64), e)).collect();
                        let xb: Vec<_> = s.vectors()[v].iter().map(|e| f.mul(&f.i_pow(b as i64), e)).collect();
                        let val = inner(&f, &xa, &xb);
                        let c = g.edge(a * nx + u, b * nx + v);
                        assert_eq!(val, f.mul(&f.from_int(4), &f.i_pow(c as i64)));
                    }
                }
            }
        }
    }
}
