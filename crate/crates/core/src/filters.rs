//! Polynomial simplicial filters and the simplicial convolutional layer stack.
//!
//! A degree-`D` filter on dimension `k` is
//! `H = W_0 I + sum_i W_i (lower)^i + sum_i W_{i+D} (upper)^i` with scalar
//! weights. The lower part is absent for `k = 0` and the upper part for the
//! top dimension `K`, so a filter stores `D + 1` or `2D + 1` weights.
//!
//! The stack has `L` layers with `F` filters per dimension. The first layer
//! maps the single input cochain to `F` features; every later layer applies the
//! sum of its `F` filters to each of the `F` incoming features, so each layer
//! emits exactly `F` features per dimension. The final features are summed
//! (and `x_0` additionally across its columns) and flattened in dimension order.

use rand::Rng;

use crate::complex::{Cochain, HodgeLaplacian, SimplicialComplex};
use crate::error::{Error, Result};
use crate::linalg::{dot, Activation};

/// Per-dimension signal: one vector per feature column.
pub type Signal = Vec<Vec<f64>>;

#[derive(Debug, Clone, PartialEq)]
pub struct SimplicialFilter {
    dim: usize,
    degree: usize,
    has_lower: bool,
    has_upper: bool,
    /// `[W_0, lower_1..lower_D?, upper_1..upper_D?]`
    weights: Vec<f64>,
}

impl SimplicialFilter {
    /// All-zero filter for dimension `dim` of a complex with top dimension `max_dim`.
    pub fn zeros(dim: usize, max_dim: usize, degree: usize) -> Self {
        let has_lower = dim > 0;
        let has_upper = dim < max_dim;
        let n = 1 + degree * (has_lower as usize + has_upper as usize);
        Self {
            dim,
            degree,
            has_lower,
            has_upper,
            weights: vec![0.0; n],
        }
    }

    pub fn identity(dim: usize, max_dim: usize, degree: usize) -> Self {
        let mut f = Self::zeros(dim, max_dim, degree);
        f.weights[0] = 1.0;
        f
    }

    /// Sets weights by their index in the full `0..=2D` numbering
    /// (0 identity, `1..=D` lower powers, `D+1..=2D` upper powers).
    pub fn with_terms(mut self, terms: &[(usize, f64)]) -> Result<Self> {
        for &(t, w) in terms {
            let slot = self.slot_of(t).ok_or(Error::OutOfRange {
                what: "filter term",
                index: t,
                limit: 2 * self.degree,
            })?;
            self.weights[slot] = w;
        }
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n_weights(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weights_mut(&mut self) -> &mut [f64] {
        &mut self.weights
    }

    /// Full term index of each stored weight.
    pub fn term_indices(&self) -> Vec<usize> {
        let d = self.degree;
        let mut t = vec![0];
        if self.has_lower {
            t.extend(1..=d);
        }
        if self.has_upper {
            t.extend(d + 1..=2 * d);
        }
        t
    }

    fn slot_of(&self, term: usize) -> Option<usize> {
        self.term_indices().iter().position(|&t| t == term)
    }

    fn init_uniform<R: Rng>(&mut self, rng: &mut R) {
        let bound = 1.0 / (self.weights.len() as f64).sqrt();
        for w in &mut self.weights {
            *w = rng.gen_range(-bound..=bound);
        }
    }
}

/// Terms `[x, lower x, .., lower^D x, upper x, .., upper^D x]` matching the
/// stored weight layout; powers are applied by repeated products.
fn basis(lap: &HodgeLaplacian, has_lower: bool, has_upper: bool, degree: usize, x: &[f64]) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(1 + 2 * degree);
    out.push(x.to_vec());
    for (present, m) in [(has_lower, lap.lower()), (has_upper, lap.upper())] {
        if !present {
            continue;
        }
        let mut prev = 0;
        for _ in 0..degree {
            let mut next = vec![0.0; x.len()];
            m.sym_matvec_into(&out[prev], &mut next);
            out.push(next);
            prev = out.len() - 1;
        }
    }
    out
}

fn combine(weights: &[f64], terms: &[Vec<f64>]) -> Vec<f64> {
    let mut out = vec![0.0; terms[0].len()];
    for (w, t) in weights.iter().zip(terms) {
        if *w != 0.0 {
            for (o, v) in out.iter_mut().zip(t) {
                *o += w * v;
            }
        }
    }
    out
}

/// Applies the filter column by column; no activation.
pub fn apply_filter(h: &SimplicialFilter, lap: &HodgeLaplacian, x: &Cochain) -> Result<Cochain> {
    if lap.k() != h.dim {
        return Err(Error::DimensionMismatch {
            what: "filter/Laplacian dimension",
            expected: h.dim,
            got: lap.k(),
        });
    }
    if x.n_rows() != lap.size() {
        return Err(Error::DimensionMismatch {
            what: "cochain rows",
            expected: lap.size(),
            got: x.n_rows(),
        });
    }
    let cols = x
        .columns()
        .iter()
        .map(|c| combine(&h.weights, &basis(lap, h.has_lower, h.has_upper, h.degree, c)))
        .collect();
    Cochain::new(h.dim, x.n_rows(), cols)
}

/// `F` filters per dimension for one layer, indexed `[filter][dim]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScLayer {
    filters: Vec<Vec<SimplicialFilter>>,
}

impl ScLayer {
    pub fn filters(&self) -> &[Vec<SimplicialFilter>] {
        &self.filters
    }

    pub fn filter_mut(&mut self, f: usize, k: usize) -> &mut SimplicialFilter {
        &mut self.filters[f][k]
    }

    /// Weights of `sum_f H^f_k` for dimension `k`.
    fn summed_weights(&self, k: usize) -> Vec<f64> {
        let mut w = vec![0.0; self.filters[0][k].weights.len()];
        for f in &self.filters {
            for (a, b) in w.iter_mut().zip(&f[k].weights) {
                *a += b;
            }
        }
        w
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScLayerStack {
    layers: Vec<ScLayer>,
    max_dim: usize,
    degree: usize,
    activation: Activation,
}

/// Recorded intermediate values of one forward pass, for backpropagation.
#[derive(Debug, Clone)]
pub struct ScTrace {
    /// `[layer][source][dim][column][term]`; layer 0 has a single source.
    basis: Vec<Vec<Vec<Vec<Vec<Vec<f64>>>>>>,
    /// `[layer][feature][dim]` pre-activations and outputs.
    pre: Vec<Vec<Vec<Signal>>>,
    out: Vec<Vec<Vec<Signal>>>,
}

pub fn param_count(n_filters: usize, degree: usize, max_dim: usize, n_layers: usize) -> usize {
    n_filters * (2 * (degree + 1) + (max_dim - 1) * (2 * degree + 1)) * n_layers
}

impl ScLayerStack {
    /// Zero-initialized stack. All of `n_layers`, `n_filters`, `degree` and
    /// `max_dim` must be at least 1.
    pub fn new(
        n_layers: usize,
        n_filters: usize,
        degree: usize,
        max_dim: usize,
        activation: Activation,
    ) -> Result<Self> {
        if n_layers == 0 || n_filters == 0 || degree == 0 || max_dim == 0 {
            return Err(Error::InvalidArgument(
                "layers, filters, degree and dimension must all be at least 1".into(),
            ));
        }
        let layers = (0..n_layers)
            .map(|_| ScLayer {
                filters: (0..n_filters)
                    .map(|_| {
                        (0..=max_dim)
                            .map(|k| SimplicialFilter::zeros(k, max_dim, degree))
                            .collect()
                    })
                    .collect(),
            })
            .collect();
        Ok(Self {
            layers,
            max_dim,
            degree,
            activation,
        })
    }

    /// Uniform in `[-1/sqrt(terms), 1/sqrt(terms)]` per filter.
    pub fn init_uniform<R: Rng>(&mut self, rng: &mut R) {
        for layer in &mut self.layers {
            for f in &mut layer.filters {
                for h in f {
                    h.init_uniform(rng);
                }
            }
        }
    }

    pub fn layers(&self) -> &[ScLayer] {
        &self.layers
    }

    pub fn layer_mut(&mut self, l: usize) -> &mut ScLayer {
        &mut self.layers[l]
    }

    pub fn n_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn n_filters(&self) -> usize {
        self.layers[0].filters.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    /// Number of stored weights, counted filter by filter.
    pub fn num_weights(&self) -> usize {
        self.layers
            .iter()
            .flat_map(|l| l.filters.iter().flatten())
            .map(SimplicialFilter::n_weights)
            .sum()
    }

    pub fn weight_slices(&self) -> Vec<&[f64]> {
        self.layers
            .iter()
            .flat_map(|l| l.filters.iter().flatten())
            .map(|h| h.weights.as_slice())
            .collect()
    }

    pub fn weight_slices_mut(&mut self) -> Vec<&mut [f64]> {
        self.layers
            .iter_mut()
            .flat_map(|l| l.filters.iter_mut().flatten())
            .map(|h| h.weights.as_mut_slice())
            .collect()
    }

    /// `(layer, filter, dim, term)` keys in the same order as `weight_slices`.
    pub fn weight_keys(&self) -> Vec<(usize, usize, usize, usize)> {
        let mut keys = Vec::new();
        for (l, layer) in self.layers.iter().enumerate() {
            for (f, filters) in layer.filters.iter().enumerate() {
                for h in filters {
                    for t in h.term_indices() {
                        keys.push((l, f, h.dim, t));
                    }
                }
            }
        }
        keys
    }

    fn check_inputs(&self, c: &SimplicialComplex, x: &[Signal]) -> Result<()> {
        if c.max_dim() != self.max_dim {
            return Err(Error::DimensionMismatch {
                what: "complex dimension",
                expected: self.max_dim,
                got: c.max_dim(),
            });
        }
        if x.len() != self.max_dim + 1 {
            return Err(Error::DimensionMismatch {
                what: "cochain count",
                expected: self.max_dim + 1,
                got: x.len(),
            });
        }
        for (k, sig) in x.iter().enumerate() {
            if sig.is_empty() {
                return Err(Error::Empty("cochain columns"));
            }
            if let Some(col) = sig.iter().find(|col| col.len() != c.count(k)) {
                return Err(Error::DimensionMismatch {
                    what: "cochain rows",
                    expected: c.count(k),
                    got: col.len(),
                });
            }
        }
        Ok(())
    }

    fn activate(&self, pre: &Signal) -> Signal {
        pre.iter()
            .map(|c| c.iter().map(|&v| self.activation.apply(v)).collect())
            .collect()
    }

    /// First layer: `x^f_k(1) = sigma(H^f_k(1) x_k(0))` for every filter `f`.
    /// Returns features indexed `[f][k]`.
    pub fn sc_forward_first(&self, c: &SimplicialComplex, x: &[Cochain]) -> Result<Vec<Vec<Signal>>> {
        let signals: Vec<Signal> = x.iter().map(|ch| ch.columns().to_vec()).collect();
        self.check_inputs(c, &signals)?;
        let (_, pre) = self.layer_pass(c, 0, std::slice::from_ref(&signals), true);
        Ok(pre.iter().map(|f| f.iter().map(|s| self.activate(s)).collect()).collect())
    }

    /// Later layer `l` (0-based): `x^g_k = sigma(sum_f H^f_k x^g_k)` per feature `g`.
    pub fn sc_forward_intermediate(
        &self,
        c: &SimplicialComplex,
        layer: usize,
        features: &[Vec<Signal>],
    ) -> Result<Vec<Vec<Signal>>> {
        if layer == 0 || layer >= self.layers.len() {
            return Err(Error::OutOfRange {
                what: "intermediate layer",
                index: layer,
                limit: self.layers.len(),
            });
        }
        if features.len() != self.n_filters() {
            return Err(Error::DimensionMismatch {
                what: "feature count",
                expected: self.n_filters(),
                got: features.len(),
            });
        }
        for f in features {
            self.check_inputs(c, f)?;
        }
        let (_, pre) = self.layer_pass(c, layer, features, false);
        Ok(pre.iter().map(|f| f.iter().map(|s| self.activate(s)).collect()).collect())
    }

    /// Final layer `l`: the intermediate rule followed by summing over features
    /// and over columns. Returns one vector per dimension.
    pub fn sc_forward_final(
        &self,
        c: &SimplicialComplex,
        layer: usize,
        features: &[Vec<Signal>],
    ) -> Result<Vec<Vec<f64>>> {
        let out = self.sc_forward_intermediate(c, layer, features)?;
        Ok(sum_features(&out, self.max_dim))
    }

    /// Basis terms and pre-activations of one layer. `first` selects the
    /// per-filter rule of the input layer.
    #[allow(clippy::type_complexity)]
    fn layer_pass(
        &self,
        c: &SimplicialComplex,
        l: usize,
        sources: &[Vec<Signal>],
        first: bool,
    ) -> (Vec<Vec<Vec<Vec<Vec<f64>>>>>, Vec<Vec<Signal>>) {
        let layer = &self.layers[l];
        let n_f = layer.filters.len();
        let basis_all: Vec<Vec<Vec<Vec<Vec<f64>>>>> = sources
            .iter()
            .map(|src| {
                src.iter()
                    .enumerate()
                    .map(|(k, sig)| {
                        let h = &layer.filters[0][k];
                        let lap = &c.laplacians()[k];
                        sig.iter()
                            .map(|col| basis(lap, h.has_lower, h.has_upper, self.degree, col))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let pre: Vec<Vec<Signal>> = if first {
            (0..n_f)
                .map(|f| {
                    (0..=self.max_dim)
                        .map(|k| {
                            basis_all[0][k]
                                .iter()
                                .map(|terms| combine(&layer.filters[f][k].weights, terms))
                                .collect()
                        })
                        .collect()
                })
                .collect()
        } else {
            let summed: Vec<Vec<f64>> = (0..=self.max_dim).map(|k| layer.summed_weights(k)).collect();
            basis_all
                .iter()
                .map(|src| {
                    src.iter()
                        .enumerate()
                        .map(|(k, cols)| cols.iter().map(|terms| combine(&summed[k], terms)).collect())
                        .collect()
                })
                .collect()
        };
        (basis_all, pre)
    }

    /// Full forward pass over one bin's input cochains, returning the
    /// flattened feature vector of length `sum_k N_k`.
    pub fn forward(&self, c: &SimplicialComplex, x: &[Cochain]) -> Result<Vec<f64>> {
        let signals: Vec<Signal> = x.iter().map(|ch| ch.columns().to_vec()).collect();
        self.forward_signals(c, signals).map(|(flat, _)| flat)
    }

    /// Forward pass that also records the values needed by `backward`.
    pub fn forward_signals(&self, c: &SimplicialComplex, x: Vec<Signal>) -> Result<(Vec<f64>, ScTrace)> {
        self.check_inputs(c, &x)?;
        let mut trace = ScTrace {
            basis: Vec::with_capacity(self.layers.len()),
            pre: Vec::with_capacity(self.layers.len()),
            out: Vec::with_capacity(self.layers.len()),
        };
        let mut sources = vec![x];
        for l in 0..self.layers.len() {
            let (b, pre) = self.layer_pass(c, l, &sources, l == 0);
            let out: Vec<Vec<Signal>> = pre
                .iter()
                .map(|f| f.iter().map(|s| self.activate(s)).collect())
                .collect();
            trace.basis.push(b);
            trace.pre.push(pre);
            sources = out.clone();
            trace.out.push(out);
        }
        let flat = flatten(&sum_features(&sources, self.max_dim));
        Ok((flat, trace))
    }

    /// Accumulates weight gradients into `grad` given the gradient of the loss
    /// with respect to the flattened output.
    pub fn backward(&self, c: &SimplicialComplex, trace: &ScTrace, d_flat: &[f64], grad: &mut ScLayerStack) {
        let n_f = self.n_filters();
        // gradient w.r.t. each final feature equals the flattened gradient
        let mut offsets = Vec::with_capacity(self.max_dim + 1);
        let mut off = 0;
        for k in 0..=self.max_dim {
            offsets.push(off);
            off += c.count(k);
        }
        let last = trace.out.len() - 1;
        let mut d_out: Vec<Vec<Signal>> = trace.out[last]
            .iter()
            .map(|f| {
                f.iter()
                    .enumerate()
                    .map(|(k, sig)| {
                        let g = &d_flat[offsets[k]..offsets[k] + c.count(k)];
                        vec![g.to_vec(); sig.len()]
                    })
                    .collect()
            })
            .collect();

        for l in (0..self.layers.len()).rev() {
            let layer = &self.layers[l];
            let mut d_pre: Vec<Vec<Signal>> = Vec::with_capacity(d_out.len());
            for (g, feats) in d_out.iter().enumerate() {
                d_pre.push(
                    feats
                        .iter()
                        .enumerate()
                        .map(|(k, sig)| {
                            sig.iter()
                                .enumerate()
                                .map(|(col, d)| {
                                    let pre = &trace.pre[l][g][k][col];
                                    let out = &trace.out[l][g][k][col];
                                    d.iter()
                                        .zip(pre.iter().zip(out))
                                        .map(|(&d, (&x, &y))| {
                                            if d == 0.0 {
                                                0.0
                                            } else {
                                                d * self.activation.derivative(x, y)
                                            }
                                        })
                                        .collect()
                                })
                                .collect()
                        })
                        .collect(),
                );
            }
            if l == 0 {
                for (f, dp) in d_pre.iter().enumerate() {
                    for (k, sig) in dp.iter().enumerate() {
                        let gw = &mut grad.layers[0].filters[f][k].weights;
                        for (col, d) in sig.iter().enumerate() {
                            for (t, term) in trace.basis[0][0][k][col].iter().enumerate() {
                                gw[t] += dot(d, term);
                            }
                        }
                    }
                }
                break;
            }
            let mut d_prev: Vec<Vec<Signal>> = Vec::with_capacity(n_f);
            for (g, dp) in d_pre.iter().enumerate() {
                let mut per_dim = Vec::with_capacity(self.max_dim + 1);
                for (k, sig) in dp.iter().enumerate() {
                    let n_terms = layer.filters[0][k].weights.len();
                    let mut tg = vec![0.0; n_terms];
                    for (col, d) in sig.iter().enumerate() {
                        for (t, term) in trace.basis[l][g][k][col].iter().enumerate() {
                            tg[t] += dot(d, term);
                        }
                    }
                    for f in 0..n_f {
                        for (a, b) in grad.layers[l].filters[f][k].weights.iter_mut().zip(&tg) {
                            *a += b;
                        }
                    }
                    let summed = layer.summed_weights(k);
                    let h = &layer.filters[0][k];
                    let lap = &c.laplacians()[k];
                    per_dim.push(
                        sig.iter()
                            .map(|d| combine(&summed, &basis(lap, h.has_lower, h.has_upper, self.degree, d)))
                            .collect(),
                    );
                }
                d_prev.push(per_dim);
            }
            d_out = d_prev;
        }
    }

    pub fn zeros_like(&self) -> Self {
        let mut z = self.clone();
        for s in z.weight_slices_mut() {
            s.iter_mut().for_each(|w| *w = 0.0);
        }
        z
    }
}

/// Sums features `[g][k]` over `g` and over columns, per dimension.
fn sum_features(features: &[Vec<Signal>], max_dim: usize) -> Vec<Vec<f64>> {
    (0..=max_dim)
        .map(|k| {
            let n = features[0][k][0].len();
            let mut acc = vec![0.0; n];
            for f in features {
                for col in &f[k] {
                    for (a, v) in acc.iter_mut().zip(col) {
                        *a += v;
                    }
                }
            }
            acc
        })
        .collect()
}

/// Concatenates per-dimension outputs in order `k = 0..=K`.
pub fn flatten(outputs: &[Vec<f64>]) -> Vec<f64> {
    outputs.iter().flatten().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn triangle() -> SimplicialComplex {
        SimplicialComplex::from_simplices(3, 2, vec![vec![0, 1, 2]]).unwrap()
    }

    #[test]
    fn identity_filter_is_identity() {
        let c = triangle();
        let x = Cochain::new(1, 3, vec![vec![0.5, -1.0, 2.0]]).unwrap();
        let h = SimplicialFilter::identity(1, 2, 2);
        assert_eq!(apply_filter(&h, c.hodge_laplacian(1).unwrap(), &x).unwrap(), x);
    }

    #[test]
    fn lower_term_is_edge_gram_matrix() {
        let c = triangle();
        let x = Cochain::new(1, 3, vec![vec![1.0, 2.0, 3.0]]).unwrap();
        let h = SimplicialFilter::zeros(1, 2, 1).with_terms(&[(1, 1.0)]).unwrap();
        let y = apply_filter(&h, c.hodge_laplacian(1).unwrap(), &x).unwrap();
        // [[2,1,-1],[1,2,1],[-1,1,2]] * [1,2,3]
        assert_eq!(y.columns()[0], vec![1.0, 8.0, 7.0]);
    }

    #[test]
    fn zero_cochain_maps_to_zero() {
        let c = triangle();
        let mut h = SimplicialFilter::zeros(1, 2, 2);
        h.init_uniform(&mut ChaCha8Rng::seed_from_u64(1));
        let x = Cochain::zeros(1, 3, 1);
        assert_eq!(apply_filter(&h, c.hodge_laplacian(1).unwrap(), &x).unwrap(), x);
    }

    #[test]
    fn filter_rejects_mismatch() {
        let c = triangle();
        let h = SimplicialFilter::identity(1, 2, 1);
        let x = Cochain::zeros(1, 4, 1);
        assert!(apply_filter(&h, c.hodge_laplacian(1).unwrap(), &x).is_err());
        assert!(apply_filter(&h, c.hodge_laplacian(0).unwrap(), &Cochain::zeros(0, 3, 1)).is_err());
        assert!(SimplicialFilter::zeros(0, 2, 1).with_terms(&[(1, 1.0)]).is_err());
    }

    #[test]
    fn weight_counts_per_dimension() {
        assert_eq!(SimplicialFilter::zeros(0, 2, 2).n_weights(), 3);
        assert_eq!(SimplicialFilter::zeros(1, 2, 2).n_weights(), 5);
        assert_eq!(SimplicialFilter::zeros(2, 2, 2).n_weights(), 3);
        assert_eq!(SimplicialFilter::zeros(1, 2, 2).term_indices(), vec![0, 1, 2, 3, 4]);
        assert_eq!(SimplicialFilter::zeros(2, 2, 2).term_indices(), vec![0, 1, 2]);
        assert_eq!(SimplicialFilter::zeros(0, 2, 2).term_indices(), vec![0, 3, 4]);
    }

    #[test]
    fn param_count_examples() {
        assert_eq!(param_count(2, 1, 2, 2), 28);
        assert_eq!(param_count(1, 1, 1, 1), 4);
        assert_eq!(param_count(3, 2, 2, 1), 33);
        for (f, d, k, l) in [(2, 1, 2, 2), (1, 1, 1, 1), (3, 2, 2, 1)] {
            let s = ScLayerStack::new(l, f, d, k, Activation::Relu).unwrap();
            assert_eq!(s.num_weights(), param_count(f, d, k, l));
            assert_eq!(s.weight_keys().len(), s.num_weights());
        }
    }

    fn identity_stack(n_layers: usize, n_filters: usize, act: Activation) -> ScLayerStack {
        let mut s = ScLayerStack::new(n_layers, n_filters, 1, 2, act).unwrap();
        for l in 0..n_layers {
            for f in 0..n_filters {
                for k in 0..=2 {
                    s.layer_mut(l).filter_mut(f, k).weights_mut()[0] = 1.0;
                }
            }
        }
        s
    }

    fn triangle_inputs() -> Vec<Cochain> {
        vec![
            Cochain::new(0, 3, vec![vec![1.0, 2.0, 0.0]]).unwrap(),
            Cochain::new(1, 3, vec![vec![1.0, 0.0, 0.0]]).unwrap(),
            Cochain::new(2, 1, vec![vec![0.0]]).unwrap(),
        ]
    }

    #[test]
    fn first_layer_examples() {
        let c = triangle();
        let s = identity_stack(1, 1, Activation::Identity);
        let out = s.sc_forward_first(&c, &triangle_inputs()).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0][0][0], vec![1.0, 2.0, 0.0]);

        let mut s = ScLayerStack::new(1, 2, 1, 2, Activation::Relu).unwrap();
        s.init_uniform(&mut ChaCha8Rng::seed_from_u64(3));
        let zeros: Vec<Cochain> = (0..=2).map(|k| Cochain::zeros(k, c.count(k), 1)).collect();
        let out = s.sc_forward_first(&c, &zeros).unwrap();
        assert_eq!(out.len(), 2);
        assert!(out.iter().flatten().flatten().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn intermediate_layer_sums_filters() {
        let c = triangle();
        let s = identity_stack(2, 2, Activation::Identity);
        let feats = s.sc_forward_first(&c, &triangle_inputs()).unwrap();
        let next = s.sc_forward_intermediate(&c, 1, &feats).unwrap();
        assert_eq!(next.len(), 2);
        for g in 0..2 {
            assert_eq!(next[g][0][0], vec![2.0, 4.0, 0.0]);
            assert_eq!(next[g][1][0], vec![2.0, 0.0, 0.0]);
        }
        let fin = s.sc_forward_final(&c, 1, &feats).unwrap();
        assert_eq!(fin[0], vec![4.0, 8.0, 0.0]);
        assert!(s.sc_forward_intermediate(&c, 0, &feats).is_err());
    }

    #[test]
    fn final_layer_sums_columns_and_flattens() {
        let c = triangle();
        let s = identity_stack(1, 1, Activation::Identity);
        let mut x = triangle_inputs();
        x[0] = Cochain::new(0, 3, vec![vec![1.0, 0.0, 0.0], vec![0.0, 2.0, 0.0], vec![1.0, 1.0, 1.0]])
            .unwrap();
        let flat = s.forward(&c, &x).unwrap();
        assert_eq!(flat.len(), 7);
        assert_eq!(&flat[..3], &[2.0, 3.0, 1.0]);
        assert_eq!(&flat[3..], &[1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn empty_dimension_contributes_nothing() {
        let c = SimplicialComplex::from_simplices(3, 2, vec![vec![0, 1]]).unwrap();
        assert_eq!(c.counts(), vec![3, 1, 0]);
        let s = identity_stack(2, 2, Activation::Relu);
        let x = vec![
            Cochain::new(0, 3, vec![vec![1.0, 0.0, 0.0]]).unwrap(),
            Cochain::new(1, 1, vec![vec![1.0]]).unwrap(),
            Cochain::new(2, 0, vec![vec![]]).unwrap(),
        ];
        assert_eq!(s.forward(&c, &x).unwrap().len(), 4);
    }

    #[test]
    fn layers_emit_f_features() {
        let c = triangle();
        let mut s = ScLayerStack::new(3, 3, 1, 2, Activation::Relu).unwrap();
        s.init_uniform(&mut ChaCha8Rng::seed_from_u64(5));
        let (_, trace) = s.forward_signals(&c, triangle_inputs().into_iter().map(|x| x.into_columns()).collect()).unwrap();
        for l in 0..3 {
            assert_eq!(trace.out[l].len(), 3);
            assert!(trace.out[l].iter().all(|f| f.len() == 3));
        }
    }
}
