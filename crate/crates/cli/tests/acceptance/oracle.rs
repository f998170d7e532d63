//! Brute-force reference computations written from the model definition,
//! sharing nothing with the library beyond reading firm attributes.

use netform::{Firms, Network};

pub struct Attrs {
    pub n: usize,
    kind: Vec<String>,
    state: Vec<String>,
    cap: Vec<f64>,
    age: Vec<f64>,
}

impl Attrs {
    pub fn of(x: &Firms) -> Self {
        let firms: Vec<_> = (0..x.len()).map(|i| x.firm(i)).collect();
        Attrs {
            n: firms.len(),
            kind: firms.iter().map(|f| f.firm_type.to_string()).collect(),
            state: firms.iter().map(|f| f.state.clone()).collect(),
            cap: firms.iter().map(|f| f.log_capital).collect(),
            age: firms.iter().map(|f| f.age).collect(),
        }
    }

    /// Direct link value u(x_i, x_j).
    pub fn u(&self, t: &[f64; 7], i: usize, j: usize) -> f64 {
        t[0] + t[1] * (self.kind[i] == self.kind[j]) as u8 as f64
            + t[2] * (self.cap[i] - self.cap[j]).abs()
            + t[3] * (self.age[i] - self.age[j]).abs()
            + t[4] * (self.state[i] == self.state[j]) as u8 as f64
    }

    /// Exogenous covariates of a dyad as they enter the link log-odds.
    pub fn covariates(&self, i: usize, j: usize) -> [f64; 5] {
        [
            2.0,
            2.0 * (self.kind[i] == self.kind[j]) as u8 as f64,
            2.0 * (self.cap[i] - self.cap[j]).abs(),
            2.0 * (self.age[i] - self.age[j]).abs(),
            2.0 * (self.state[i] == self.state[j]) as u8 as f64,
        ]
    }
}

pub type Adj = Vec<Vec<bool>>;

pub fn adjacency(g: &Network) -> Adj {
    let n = g.n();
    (0..n).map(|i| (0..n).map(|j| i != j && g.has_edge(i, j)).collect()).collect()
}

/// Pairs (i, j), i < j, in lexicographic order.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

pub fn from_code(n: usize, code: usize) -> Adj {
    let mut a = vec![vec![false; n]; n];
    for (k, (i, j)) in pairs(n).into_iter().enumerate() {
        if code >> k & 1 == 1 {
            a[i][j] = true;
            a[j][i] = true;
        }
    }
    a
}

pub fn code_of(a: &Adj) -> usize {
    pairs(a.len()).into_iter().enumerate().filter(|(_, (i, j))| a[*i][*j]).map(|(k, _)| 1 << k).sum()
}

pub fn to_network(a: &Adj) -> Network {
    let n = a.len();
    Network::from_edges(n, pairs(n).into_iter().filter(|&(i, j)| a[i][j])).unwrap()
}

/// Edges, 2-stars and triangles by explicit counting.
pub fn counts(a: &Adj) -> (f64, f64, f64) {
    let n = a.len();
    let mut e = 0.0;
    let mut tri = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            if a[i][j] {
                e += 1.0;
                for k in j + 1..n {
                    if a[i][k] && a[j][k] {
                        tri += 1.0;
                    }
                }
            }
        }
    }
    let s2 = (0..n)
        .map(|v| {
            let d = a[v].iter().filter(|&&b| b).count() as f64;
            d * (d - 1.0) / 2.0
        })
        .sum();
    (e, s2, tri)
}

/// Q(g) = 2 Σ_edges u + beta S2 + 4 gamma T.
pub fn potential(a: &Adj, x: &Attrs, t: &[f64; 7]) -> f64 {
    let edge_sum: f64 = pairs(x.n).into_iter().filter(|&(i, j)| a[i][j]).map(|(i, j)| x.u(t, i, j)).sum();
    let (_, s2, tri) = counts(a);
    2.0 * edge_sum + t[5] * s2 + 4.0 * t[6] * tri
}

/// U_i = Σ_{j ~ i} [u_ij + beta (d_j - 1) + gamma |N(i) ∩ N(j)|].
pub fn payoff(a: &Adj, x: &Attrs, t: &[f64; 7], i: usize) -> f64 {
    (0..x.n)
        .filter(|&j| a[i][j])
        .map(|j| {
            let others = (0..x.n).filter(|&k| k != i && a[j][k]).count() as f64;
            let shared = (0..x.n).filter(|&k| a[i][k] && a[j][k]).count() as f64;
            x.u(t, i, j) + t[5] * others + t[6] * shared
        })
        .sum()
}

pub fn toggled(a: &Adj, i: usize, j: usize, on: bool) -> Adj {
    let mut b = a.clone();
    b[i][j] = on;
    b[j][i] = on;
    b
}

/// Stationary probabilities indexed by [`code_of`].
pub fn stationary(x: &Attrs, t: &[f64; 7]) -> Vec<f64> {
    let d = x.n * (x.n - 1) / 2;
    let q: Vec<f64> = (0..1usize << d).map(|c| potential(&from_code(x.n, c), x, t)).collect();
    let top = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = q.iter().map(|v| (v - top).exp()).collect();
    let z: f64 = w.iter().sum();
    w.into_iter().map(|v| v / z).collect()
}

/// Networks where no single added or removed link raises Q.
pub fn local_maxima(x: &Attrs, t: &[f64; 7]) -> Vec<usize> {
    let d = x.n * (x.n - 1) / 2;
    (0..1usize << d)
        .filter(|&c| {
            let a = from_code(x.n, c);
            let q = potential(&a, x, t);
            pairs(x.n).into_iter().all(|(i, j)| potential(&toggled(&a, i, j, !a[i][j]), x, t) <= q)
        })
        .collect()
}

/// Logistic regression by Newton-Raphson on an explicit design matrix.
pub fn logistic_mle(design: &[[f64; 5]], y: &[bool]) -> [f64; 5] {
    use nalgebra::{DMatrix, DVector};
    let mut beta = DVector::<f64>::zeros(5);
    for _ in 0..100 {
        let mut grad = DVector::<f64>::zeros(5);
        let mut info = DMatrix::<f64>::zeros(5, 5);
        for (row, &yi) in design.iter().zip(y) {
            let z = DVector::from_row_slice(row);
            let p = 1.0 / (1.0 + (-z.dot(&beta)).exp());
            grad += &z * (yi as u8 as f64 - p);
            info += &z * z.transpose() * (p * (1.0 - p));
        }
        let step = info.lu().solve(&grad).expect("information matrix is invertible");
        beta += &step;
        if step.amax() < 1e-13 {
            break;
        }
    }
    [beta[0], beta[1], beta[2], beta[3], beta[4]]
}
