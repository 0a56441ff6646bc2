//! Stacked Elman recurrent layers with a linear read-out head.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{nonzero_indices, Activation, Matrix};

#[derive(Debug, Clone, PartialEq)]
pub struct ElmanLayer {
    pub w_h: Matrix,
    pub w_c: Matrix,
    pub b_h: Vec<f64>,
    pub b_c: Vec<f64>,
    pub activation: Activation,
}

impl ElmanLayer {
    pub fn zeros(input_dim: usize, hidden: usize, activation: Activation) -> Self {
        Self {
            w_h: Matrix::zeros(hidden, input_dim),
            w_c: Matrix::zeros(hidden, hidden),
            b_h: vec![0.0; hidden],
            b_c: vec![0.0; hidden],
            activation,
        }
    }

    pub fn hidden(&self) -> usize {
        self.b_h.len()
    }

    pub fn input_dim(&self) -> usize {
        self.w_h.cols()
    }

    /// Pre-activation for one step; `nz` lists the nonzero entries of `z`.
    fn pre(&self, z: &[f64], nz: Option<&[usize]>, h_prev: &[f64]) -> Vec<f64> {
        let mut a: Vec<f64> = self.b_h.iter().zip(&self.b_c).map(|(x, y)| x + y).collect();
        match nz {
            Some(nz) => self.w_h.gemv_add_sparse(z, nz, &mut a),
            None => self.w_h.gemv_add(z, &mut a),
        }
        self.w_c.gemv_add(h_prev, &mut a);
        a
    }
}

/// `h_t = sigma(W_h z_t + b_h + W_c h_prev + b_c)`.
pub fn cell_step(layer: &ElmanLayer, z: &[f64], h_prev: &[f64]) -> Result<Vec<f64>> {
    if z.len() != layer.input_dim() {
        return Err(Error::DimensionMismatch {
            what: "RNN input",
            expected: layer.input_dim(),
            got: z.len(),
        });
    }
    if h_prev.len() != layer.hidden() {
        return Err(Error::DimensionMismatch {
            what: "RNN hidden state",
            expected: layer.hidden(),
            got: h_prev.len(),
        });
    }
    let mut a = layer.pre(z, None, h_prev);
    a.iter_mut().for_each(|v| *v = layer.activation.apply(*v));
    Ok(a)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RnnStack {
    pub layers: Vec<ElmanLayer>,
    pub head_w: Matrix,
    pub head_b: Vec<f64>,
    pub out_activation: Activation,
}

/// Values recorded by a training forward pass.
#[derive(Debug, Clone)]
pub struct RnnTrace {
    /// Input sequence of each layer (after dropout for layers above the first).
    inputs: Vec<Vec<Vec<f64>>>,
    /// Nonzero positions of the first layer's inputs.
    nz: Vec<Vec<usize>>,
    /// Hidden states `[layer][t]`.
    hidden: Vec<Vec<Vec<f64>>>,
    /// Dropout scale applied to each layer's outputs before the next layer.
    masks: Vec<Option<Vec<Vec<f64>>>>,
    head_pre: Vec<f64>,
    output: Vec<f64>,
}

impl RnnTrace {
    pub fn output(&self) -> &[f64] {
        &self.output
    }
}

impl RnnStack {
    /// Zero-initialized stack of `n_layers` layers with `hidden` units each.
    pub fn new(input_dim: usize, hidden: usize, n_layers: usize, output_dim: usize) -> Result<Self> {
        if input_dim == 0 || hidden == 0 || n_layers == 0 || output_dim == 0 {
            return Err(Error::InvalidArgument(
                "RNN input, hidden, layer and output sizes must be positive".into(),
            ));
        }
        let layers = (0..n_layers)
            .map(|l| ElmanLayer::zeros(if l == 0 { input_dim } else { hidden }, hidden, Activation::Tanh))
            .collect();
        Ok(Self {
            layers,
            head_w: Matrix::zeros(output_dim, hidden),
            head_b: vec![0.0; output_dim],
            out_activation: Activation::Identity,
        })
    }

    /// Uniform in `[-1/sqrt(H), 1/sqrt(H)]` for every recurrent weight and
    /// bias; the head uses its own fan-in.
    pub fn init_uniform<R: Rng>(&mut self, rng: &mut R) {
        for layer in &mut self.layers {
            let bound = 1.0 / (layer.hidden() as f64).sqrt();
            for s in [
                layer.w_h.as_mut_slice(),
                layer.w_c.as_mut_slice(),
                &mut layer.b_h,
                &mut layer.b_c,
            ] {
                s.iter_mut().for_each(|w| *w = rng.gen_range(-bound..=bound));
            }
        }
        let bound = 1.0 / (self.head_w.cols() as f64).sqrt();
        for s in [self.head_w.as_mut_slice(), &mut self.head_b] {
            s.iter_mut().for_each(|w| *w = rng.gen_range(-bound..=bound));
        }
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].input_dim()
    }

    pub fn hidden(&self) -> usize {
        self.layers[0].hidden()
    }

    pub fn output_dim(&self) -> usize {
        self.head_b.len()
    }

    pub fn param_slices(&self) -> Vec<&[f64]> {
        let mut v: Vec<&[f64]> = Vec::new();
        for l in &self.layers {
            v.extend([l.w_h.as_slice(), l.w_c.as_slice(), &l.b_h, &l.b_c]);
        }
        v.push(self.head_w.as_slice());
        v.push(&self.head_b);
        v
    }

    pub fn param_slices_mut(&mut self) -> Vec<&mut [f64]> {
        let mut v: Vec<&mut [f64]> = Vec::new();
        for l in &mut self.layers {
            v.push(l.w_h.as_mut_slice());
            v.push(l.w_c.as_mut_slice());
            v.push(&mut l.b_h);
            v.push(&mut l.b_c);
        }
        v.push(self.head_w.as_mut_slice());
        v.push(&mut self.head_b);
        v
    }

    /// Names in `param_slices` order, keyed by layer, matrix, row and column.
    pub fn param_names(&self, prefix: &str) -> Vec<String> {
        let mut names = Vec::new();
        let matrix = |names: &mut Vec<String>, base: String, m: &Matrix| {
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    names.push(format!("{base}/{r}/{c}"));
                }
            }
        };
        for (i, l) in self.layers.iter().enumerate() {
            matrix(&mut names, format!("{prefix}/{i}/w_ih"), &l.w_h);
            matrix(&mut names, format!("{prefix}/{i}/w_hh"), &l.w_c);
            names.extend((0..l.hidden()).map(|r| format!("{prefix}/{i}/b_ih/{r}")));
            names.extend((0..l.hidden()).map(|r| format!("{prefix}/{i}/b_hh/{r}")));
        }
        matrix(&mut names, "head/w".to_string(), &self.head_w);
        names.extend((0..self.output_dim()).map(|r| format!("head/b/{r}")));
        names
    }

    fn check_sequence(&self, seq: &[Vec<f64>]) -> Result<()> {
        if seq.is_empty() {
            return Err(Error::Empty("input sequence"));
        }
        if let Some(z) = seq.iter().find(|z| z.len() != self.input_dim()) {
            return Err(Error::DimensionMismatch {
                what: "RNN input",
                expected: self.input_dim(),
                got: z.len(),
            });
        }
        Ok(())
    }

    /// Runs every layer over the whole sequence and applies the head to the
    /// top layer's final hidden state.
    pub fn forward(&self, seq: &[Vec<f64>]) -> Result<Vec<f64>> {
        self.check_sequence(seq)?;
        let nz: Vec<Vec<usize>> = seq.iter().map(|z| nonzero_indices(z)).collect();
        let mut inputs: Vec<Vec<f64>> = seq.to_vec();
        for (i, layer) in self.layers.iter().enumerate() {
            let mut h = vec![0.0; layer.hidden()];
            let mut outs = Vec::with_capacity(inputs.len());
            for (t, z) in inputs.iter().enumerate() {
                let nzt = (i == 0).then(|| nz[t].as_slice());
                h = layer.pre(z, nzt, &h);
                h.iter_mut().for_each(|v| *v = layer.activation.apply(*v));
                outs.push(h.clone());
            }
            inputs = outs;
        }
        Ok(self.head(inputs.last().expect("nonempty")).1)
    }

    fn head(&self, h: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut pre = self.head_b.clone();
        self.head_w.gemv_add(h, &mut pre);
        let out = pre.iter().map(|&v| self.out_activation.apply(v)).collect();
        (pre, out)
    }

    /// Forward pass recording everything `backward` needs. With `dropout > 0`
    /// each unit passed between stacked layers is zeroed with that
    /// probability and the survivors scaled by `1/(1 - dropout)`.
    pub fn forward_train<R: Rng>(&self, seq: Vec<Vec<f64>>, dropout: f64, rng: &mut R) -> Result<RnnTrace> {
        self.check_sequence(&seq)?;
        let nz: Vec<Vec<usize>> = seq.iter().map(|z| nonzero_indices(z)).collect();
        let n_layers = self.layers.len();
        let mut trace = RnnTrace {
            inputs: Vec::with_capacity(n_layers),
            nz,
            hidden: Vec::with_capacity(n_layers),
            masks: Vec::with_capacity(n_layers),
            head_pre: Vec::new(),
            output: Vec::new(),
        };
        let mut inputs = seq;
        for (i, layer) in self.layers.iter().enumerate() {
            let mut h = vec![0.0; layer.hidden()];
            let mut hs = Vec::with_capacity(inputs.len());
            for (t, z) in inputs.iter().enumerate() {
                let nzt = (i == 0).then(|| trace.nz[t].as_slice());
                h = layer.pre(z, nzt, &h);
                h.iter_mut().for_each(|v| *v = layer.activation.apply(*v));
                hs.push(h.clone());
            }
            let mask = (i + 1 < n_layers && dropout > 0.0).then(|| {
                let keep = 1.0 / (1.0 - dropout);
                hs.iter()
                    .map(|h| {
                        h.iter()
                            .map(|_| if rng.gen::<f64>() < dropout { 0.0 } else { keep })
                            .collect::<Vec<f64>>()
                    })
                    .collect::<Vec<_>>()
            });
            let next = match &mask {
                Some(m) => hs
                    .iter()
                    .zip(m)
                    .map(|(h, m)| h.iter().zip(m).map(|(a, b)| a * b).collect())
                    .collect(),
                None => hs.clone(),
            };
            trace.inputs.push(std::mem::replace(&mut inputs, next));
            trace.hidden.push(hs);
            trace.masks.push(mask);
        }
        let (pre, out) = self.head(trace.hidden[n_layers - 1].last().expect("nonempty"));
        trace.head_pre = pre;
        trace.output = out;
        Ok(trace)
    }

    /// Backpropagation through time from `d_out`, the loss gradient with
    /// respect to the output. Gradients are added into `grad`. When
    /// `input_grad` is set, returns the gradient with respect to the input
    /// sequence; entries outside `input_grad[t]` (if given) are left zero.
    pub fn backward(
        &self,
        trace: &RnnTrace,
        d_out: &[f64],
        grad: &mut RnnStack,
        input_grad: Option<Option<&[Vec<usize>]>>,
    ) -> Option<Vec<Vec<f64>>> {
        let d_pre: Vec<f64> = d_out
            .iter()
            .zip(trace.head_pre.iter().zip(&trace.output))
            .map(|(&d, (&x, &y))| d * self.out_activation.derivative(x, y))
            .collect();
        let n_layers = self.layers.len();
        let top = &trace.hidden[n_layers - 1];
        let t_len = top.len();
        grad.head_w.rank1_add(&d_pre, &top[t_len - 1]);
        for (g, d) in grad.head_b.iter_mut().zip(&d_pre) {
            *g += d;
        }
        // gradient w.r.t. each layer's hidden outputs, per time step
        let mut d_h: Vec<Vec<f64>> = vec![vec![0.0; self.hidden()]; t_len];
        self.head_w.gemv_t_add(&d_pre, &mut d_h[t_len - 1]);

        for i in (0..n_layers).rev() {
            let layer = &self.layers[i];
            let g = &mut grad.layers[i];
            let hs = &trace.hidden[i];
            let zs = &trace.inputs[i];
            let want_input = i > 0 || input_grad.is_some();
            let mut d_in: Vec<Vec<f64>> = if want_input {
                vec![vec![0.0; layer.input_dim()]; t_len]
            } else {
                Vec::new()
            };
            let mut carry = vec![0.0; layer.hidden()];
            for t in (0..t_len).rev() {
                let da: Vec<f64> = d_h[t]
                    .iter()
                    .zip(&carry)
                    .zip(&hs[t])
                    .map(|((&a, &b), &y)| (a + b) * layer.activation.derivative_at_output(y))
                    .collect();
                if i == 0 {
                    g.w_h.rank1_add_sparse(&da, &zs[t], &trace.nz[t]);
                } else {
                    g.w_h.rank1_add(&da, &zs[t]);
                }
                if t > 0 {
                    g.w_c.rank1_add(&da, &hs[t - 1]);
                }
                for (gb, d) in g.b_h.iter_mut().zip(&da) {
                    *gb += d;
                }
                for (gb, d) in g.b_c.iter_mut().zip(&da) {
                    *gb += d;
                }
                carry.iter_mut().for_each(|c| *c = 0.0);
                layer.w_c.gemv_t_add(&da, &mut carry);
                if want_input {
                    match input_grad.flatten().filter(|_| i == 0) {
                        Some(keep) => layer.w_h.gemv_t_add_sparse(&da, &keep[t], &mut d_in[t]),
                        None => layer.w_h.gemv_t_add(&da, &mut d_in[t]),
                    }
                }
            }
            if i > 0 {
                if let Some(mask) = &trace.masks[i - 1] {
                    for (d, m) in d_in.iter_mut().zip(mask) {
                        d.iter_mut().zip(m).for_each(|(a, b)| *a *= b);
                    }
                }
                d_h = d_in;
            } else if want_input {
                return Some(d_in);
            }
        }
        None
    }

    pub fn zeros_like(&self) -> Self {
        let mut z = self.clone();
        for s in z.param_slices_mut() {
            s.iter_mut().for_each(|w| *w = 0.0);
        }
        z
    }
}

/// Single-sequence convenience wrapper around [`RnnStack::forward`].
pub fn rnn_forward(stack: &RnnStack, seq: &[Vec<f64>]) -> Result<Vec<f64>> {
    stack.forward(seq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_weights_give_zero_state() {
        let l = ElmanLayer::zeros(3, 4, Activation::Tanh);
        assert_eq!(cell_step(&l, &[1.0, 2.0, 3.0], &[0.0; 4]).unwrap(), vec![0.0; 4]);
    }

    #[test]
    fn scalar_cell_matches_tanh_one() {
        let mut l = ElmanLayer::zeros(1, 1, Activation::Tanh);
        l.w_h.set(0, 0, 1.0);
        let h = cell_step(&l, &[1.0], &[0.0]).unwrap();
        assert!((h[0] - 0.761_594_155_955_764_9).abs() < 1e-12);
    }

    #[test]
    fn identity_recurrence_is_memory() {
        let mut l = ElmanLayer::zeros(2, 3, Activation::Identity);
        l.w_c = Matrix::identity(3);
        let prev = [0.3, -1.0, 2.0];
        assert_eq!(cell_step(&l, &[0.0, 0.0], &prev).unwrap(), prev.to_vec());
        assert!(cell_step(&l, &[0.0], &prev).is_err());
    }

    #[test]
    fn single_step_sequence_is_cell_plus_head() {
        let mut s = RnnStack::new(3, 4, 1, 2).unwrap();
        s.init_uniform(&mut ChaCha8Rng::seed_from_u64(2));
        let z = vec![0.5, 0.0, -1.0];
        let h = cell_step(&s.layers[0], &z, &[0.0; 4]).unwrap();
        let mut y = s.head_b.clone();
        s.head_w.gemv_add(&h, &mut y);
        assert_eq!(rnn_forward(&s, &[z]).unwrap(), y);
    }

    #[test]
    fn zero_stack_outputs_zero_and_empty_is_error() {
        let s = RnnStack::new(3, 5, 2, 2).unwrap();
        assert_eq!(s.forward(&vec![vec![1.0, 2.0, 3.0]; 5]).unwrap(), vec![0.0, 0.0]);
        assert!(s.forward(&[]).is_err());
        assert!(s.forward(&[vec![1.0]]).is_err());
    }

    fn loss(s: &RnnStack, seq: &[Vec<f64>], target: &[f64]) -> f64 {
        let y = s.forward(seq).unwrap();
        y.iter().zip(target).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / y.len() as f64
    }

    #[test]
    fn bptt_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut s = RnnStack::new(4, 3, 2, 2).unwrap();
        s.init_uniform(&mut rng);
        let seq: Vec<Vec<f64>> = (0..3)
            .map(|t| (0..4).map(|i| if (i + t) % 3 == 0 { 0.0 } else { rng.gen_range(-1.0..1.0) }).collect())
            .collect();
        let target = [0.3, -0.2];
        let trace = s.forward_train(seq.clone(), 0.0, &mut rng).unwrap();
        let d_out: Vec<f64> = trace.output().iter().zip(&target).map(|(y, t)| y - t).collect();
        let mut g = s.zeros_like();
        let d_in = s.backward(&trace, &d_out, &mut g, Some(None)).unwrap();

        let eps = 1e-5;
        let analytic: Vec<f64> = g.param_slices().concat();
        let mut k = 0;
        for si in 0..s.param_slices().len() {
            for j in 0..s.param_slices()[si].len() {
                let mut p = s.clone();
                p.param_slices_mut()[si][j] += eps;
                let up = loss(&p, &seq, &target);
                p.param_slices_mut()[si][j] -= 2.0 * eps;
                let down = loss(&p, &seq, &target);
                let fd = (up - down) / (2.0 * eps);
                let a = analytic[k];
                assert!((a - fd).abs() <= 1e-6_f64.max(1e-4 * fd.abs()), "param {k}: {a} vs {fd}");
                k += 1;
            }
        }
        for t in 0..3 {
            for i in 0..4 {
                let mut sq = seq.clone();
                sq[t][i] += eps;
                let up = loss(&s, &sq, &target);
                sq[t][i] -= 2.0 * eps;
                let down = loss(&s, &sq, &target);
                let fd = (up - down) / (2.0 * eps);
                assert!((d_in[t][i] - fd).abs() <= 1e-6_f64.max(1e-4 * fd.abs()));
            }
        }
    }

    #[test]
    fn dropout_is_inverted_and_training_only() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut s = RnnStack::new(2, 50, 2, 2).unwrap();
        s.init_uniform(&mut rng);
        let seq = vec![vec![1.0, -1.0]; 3];
        let t = s.forward_train(seq.clone(), 0.5, &mut rng).unwrap();
        let m = t.masks[0].as_ref().unwrap();
        assert!(m.iter().flatten().all(|&v| v == 0.0 || v == 2.0));
        assert!(t.masks[1].is_none());
        let t0 = s.forward_train(seq.clone(), 0.0, &mut rng).unwrap();
        assert_eq!(t0.output(), s.forward(&seq).unwrap().as_slice());
    }

    #[test]
    fn names_align_with_slices() {
        let s = RnnStack::new(3, 2, 2, 2).unwrap();
        let n: usize = s.param_slices().iter().map(|p| p.len()).sum();
        let names = s.param_names("rnn");
        assert_eq!(names.len(), n);
        assert_eq!(names[0], "rnn/0/w_ih/0/0");
        assert_eq!(names.last().unwrap(), "head/b/1");
    }
}
