//! Functional simplicial complexes, incidence matrices and Hodge Laplacians.
//!
//! Every simplex is stored with its vertices in ascending order, which fixes
//! its orientation: the face obtained by deleting vertex `j` enters the
//! boundary with sign `(-1)^j`. Simplices of each dimension are kept in
//! lexicographic order of their vertex tuples, so indices are deterministic.

use std::collections::{BTreeSet, HashMap};
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sparse::SparseMatrix;
use crate::spikes::{BinaryMatrix, SpikeCountMatrix};

/// A simplex given by its strictly ascending vertex list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    pub fn new(vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidArgument("a simplex needs at least one vertex".into()));
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(format!(
                "simplex vertices must be strictly ascending: {vertices:?}"
            )));
        }
        Ok(Self(vertices))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Face with vertex `j` removed.
    pub fn face(&self, j: usize) -> Simplex {
        let mut v = self.0.clone();
        v.remove(j);
        Simplex(v)
    }
}

/// All `size`-element subsets of an ascending slice, in lexicographic order.
pub fn subsets(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    let n = items.len();
    if size > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let mut i = size;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - size {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Signed incidence between `(k-1)`- and `k`-simplices, stored by column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    k: usize,
    n_rows: usize,
    columns: Vec<Vec<(usize, i8)>>,
}

impl IncidenceMatrix {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    /// Nonzeros of column `j` in face order (deleted vertex 0, 1, ...).
    pub fn column(&self, j: usize) -> &[(usize, i8)] {
        &self.columns[j]
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        let t = self
            .columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |&(i, s)| (i, j, s as i64)))
            .collect();
        SparseMatrix::from_triplets(self.n_rows, self.columns.len(), t)
    }
}

/// `L_k = B_k^T B_k + B_{k+1} B_{k+1}^T`, kept together with both parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeLaplacian {
    k: usize,
    lower: SparseMatrix,
    upper: SparseMatrix,
    total: SparseMatrix,
}

impl HodgeLaplacian {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn size(&self) -> usize {
        self.total.n_rows()
    }

    /// `B_k^T B_k`; zero for `k = 0`.
    pub fn lower(&self) -> &SparseMatrix {
        &self.lower
    }

    /// `B_{k+1} B_{k+1}^T`; zero for the top dimension.
    pub fn upper(&self) -> &SparseMatrix {
        &self.upper
    }

    pub fn total(&self) -> &SparseMatrix {
        &self.total
    }
}

#[derive(Debug, Clone)]
pub struct SimplicialComplex {
    n_vertices: usize,
    max_dim: usize,
    simplices: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
    incidence: Vec<IncidenceMatrix>,
    laplacians: Vec<HodgeLaplacian>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.n_vertices == other.n_vertices
            && self.max_dim == other.max_dim
            && self.simplices == other.simplices
    }
}

impl SimplicialComplex {
    /// Closes the given vertex sets under faces. Sets larger than
    /// `max_dim + 1` vertices contribute all of their `max_dim`-faces; every
    /// vertex `0..n_vertices` is present as a 0-simplex.
    pub fn from_simplices<I>(n_vertices: usize, max_dim: usize, sets: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<usize>>,
    {
        if max_dim < 1 {
            return Err(Error::InvalidArgument("maximum dimension must be at least 1".into()));
        }
        let mut levels: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); max_dim + 1];
        for mut set in sets {
            set.sort_unstable();
            set.dedup();
            if let Some(&v) = set.iter().find(|&&v| v >= n_vertices) {
                return Err(Error::OutOfRange {
                    what: "vertex",
                    index: v,
                    limit: n_vertices,
                });
            }
            match set.len() {
                0 | 1 => {}
                n if n <= max_dim + 1 => {
                    levels[n - 1].insert(set);
                }
                _ => levels[max_dim].extend(subsets(&set, max_dim + 1)),
            }
        }
        for k in (1..=max_dim).rev() {
            let faces: Vec<Vec<usize>> = levels[k]
                .iter()
                .flat_map(|s| (0..s.len()).map(move |j| {
                    let mut f = s.clone();
                    f.remove(j);
                    f
                }))
                .collect();
            levels[k - 1].extend(faces);
        }
        levels[0] = (0..n_vertices).map(|v| vec![v]).collect();

        let simplices: Vec<Vec<Simplex>> = levels
            .into_iter()
            .map(|l| l.into_iter().map(Simplex).collect())
            .collect();
        let index = simplices
            .iter()
            .map(|l| l.iter().enumerate().map(|(i, s)| (s.0.clone(), i)).collect())
            .collect();
        let mut c = Self {
            n_vertices,
            max_dim,
            simplices,
            index,
            incidence: Vec::new(),
            laplacians: Vec::new(),
        };
        c.incidence = (0..=max_dim + 1).map(|k| c.compute_incidence(k)).collect();
        c.laplacians = (0..=max_dim).map(|k| c.compute_laplacian(k)).collect();
        Ok(c)
    }

    fn compute_incidence(&self, k: usize) -> IncidenceMatrix {
        if k == 0 {
            return IncidenceMatrix {
                k,
                n_rows: self.n_vertices,
                columns: vec![Vec::new(); self.n_vertices],
            };
        }
        let n_rows = self.simplices[k - 1].len();
        if k > self.max_dim {
            return IncidenceMatrix {
                k,
                n_rows,
                columns: Vec::new(),
            };
        }
        let columns = self.simplices[k]
            .iter()
            .map(|s| {
                (0..=k)
                    .map(|j| {
                        let face = s.face(j);
                        let row = self.index[k - 1][&face.0];
                        (row, if j % 2 == 0 { 1 } else { -1 })
                    })
                    .collect()
            })
            .collect();
        IncidenceMatrix { k, n_rows, columns }
    }

    fn compute_laplacian(&self, k: usize) -> HodgeLaplacian {
        let n = self.simplices[k].len();
        let lower = if k == 0 {
            SparseMatrix::zeros(n, n)
        } else {
            let b = self.incidence[k].to_sparse();
            b.transpose().matmul(&b)
        };
        let upper = {
            let b = self.incidence[k + 1].to_sparse();
            b.matmul(&b.transpose())
        };
        let total = lower.add(&upper);
        HodgeLaplacian {
            k,
            lower,
            upper,
            total,
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// The dimension cap `K`; dimensions up to `K` may be empty.
    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    /// Number of stored `k`-simplices, `N_k`.
    pub fn count(&self, k: usize) -> usize {
        self.simplices.get(k).map_or(0, Vec::len)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    /// Total number of simplices, the length of a flattened feature vector.
    pub fn total_count(&self) -> usize {
        self.simplices.iter().map(Vec::len).sum()
    }

    pub fn simplices(&self, k: usize) -> &[Simplex] {
        &self.simplices[k]
    }

    pub fn index_of(&self, vertices: &[usize]) -> Option<usize> {
        self.index.get(vertices.len().checked_sub(1)?)?.get(vertices).copied()
    }

    /// `B_k` for `0 <= k <= K`; `B_0` is the zero `N_0 x N_0` matrix.
    pub fn incidence_matrix(&self, k: usize) -> Result<&IncidenceMatrix> {
        if k > self.max_dim {
            return Err(Error::OutOfRange {
                what: "incidence dimension",
                index: k,
                limit: self.max_dim,
            });
        }
        Ok(&self.incidence[k])
    }

    pub fn hodge_laplacian(&self, k: usize) -> Result<&HodgeLaplacian> {
        self.laplacians.get(k).ok_or(Error::OutOfRange {
            what: "Laplacian dimension",
            index: k,
            limit: self.max_dim,
        })
    }

    pub fn laplacians(&self) -> &[HodgeLaplacian] {
        &self.laplacians
    }

    /// Indices of the `k`-simplices whose vertices all lie in `active`
    /// (ascending neuron ids), in ascending order.
    pub fn covered(&self, k: usize, active: &[usize]) -> Vec<usize> {
        let size = k + 1;
        if active.len() < size || self.simplices[k].is_empty() {
            return Vec::new();
        }
        let mut out: Vec<usize> = if binomial(active.len(), size) <= self.simplices[k].len() {
            subsets(active, size)
                .iter()
                .filter_map(|s| self.index[k].get(s).copied())
                .collect()
        } else {
            let mut is_active = vec![false; self.n_vertices];
            for &v in active {
                is_active[v] = true;
            }
            self.simplices[k]
                .iter()
                .enumerate()
                .filter(|(_, s)| s.0.iter().all(|&v| is_active[v]))
                .map(|(i, _)| i)
                .collect()
        };
        out.sort_unstable();
        out
    }

    pub fn to_dump(&self) -> ComplexDump {
        ComplexDump {
            n_vertices: self.n_vertices,
            max_dim: self.max_dim,
            simplices: self
                .simplices
                .iter()
                .map(|l| l.iter().map(|s| s.0.clone()).collect())
                .collect(),
            incidence: (1..=self.max_dim)
                .map(|k| MatrixDump::from_sparse(k, &self.incidence[k].to_sparse()))
                .collect(),
            laplacians: self
                .laplacians
                .iter()
                .map(|l| MatrixDump::from_sparse(l.k, &l.total))
                .collect(),
        }
    }

    /// Rebuilds a complex from a dump, checking that its simplex lists are
    /// face-closed and in canonical order.
    pub fn from_dump(d: &ComplexDump) -> Result<Self> {
        let c = Self::from_simplices(
            d.n_vertices,
            d.max_dim,
            d.simplices.iter().flatten().cloned(),
        )?;
        let listed: Vec<Vec<Vec<usize>>> = c
            .simplices
            .iter()
            .map(|l| l.iter().map(|s| s.0.clone()).collect())
            .collect();
        if listed != d.simplices {
            return Err(Error::Checkpoint(
                "simplex lists are not face-closed or not canonically ordered".into(),
            ));
        }
        Ok(c)
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: usize = 1;
    for i in 0..k {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

/// Sparse matrix as `(row, col, value)` triples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDump {
    pub k: usize,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, i64)>,
}

impl MatrixDump {
    fn from_sparse(k: usize, m: &SparseMatrix) -> Self {
        Self {
            k,
            rows: m.n_rows(),
            cols: m.n_cols(),
            entries: m.triplets(),
        }
    }
}

/// Inspection/export form of a complex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexDump {
    pub n_vertices: usize,
    pub max_dim: usize,
    pub simplices: Vec<Vec<Vec<usize>>>,
    pub incidence: Vec<MatrixDump>,
    pub laplacians: Vec<MatrixDump>,
}

/// Builds the complex spanned by the co-active neuron sets of the given columns.
pub fn build_complex(
    b: &BinaryMatrix,
    k_max: usize,
    columns: Range<usize>,
) -> Result<SimplicialComplex> {
    if k_max < 1 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    if columns.end > b.n_bins() || columns.start > columns.end {
        return Err(Error::OutOfRange {
            what: "column range end",
            index: columns.end,
            limit: b.n_bins(),
        });
    }
    SimplicialComplex::from_simplices(b.n_neurons(), k_max, columns.map(|j| b.active(j)))
}

/// Features defined on the `k`-simplices of a complex: `N_k` rows, one
/// vector per feature column.
#[derive(Debug, Clone, PartialEq)]
pub struct Cochain {
    dim: usize,
    n_rows: usize,
    columns: Vec<Vec<f64>>,
}

impl Cochain {
    pub fn new(dim: usize, n_rows: usize, columns: Vec<Vec<f64>>) -> Result<Self> {
        if let Some(c) = columns.iter().find(|c| c.len() != n_rows) {
            return Err(Error::DimensionMismatch {
                what: "cochain column",
                expected: n_rows,
                got: c.len(),
            });
        }
        Ok(Self {
            dim,
            n_rows,
            columns,
        })
    }

    pub fn zeros(dim: usize, n_rows: usize, n_cols: usize) -> Self {
        Self {
            dim,
            n_rows,
            columns: vec![vec![0.0; n_rows]; n_cols],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn columns_mut(&mut self) -> &mut [Vec<f64>] {
        &mut self.columns
    }

    pub fn into_columns(self) -> Vec<Vec<f64>> {
        self.columns
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.columns[col][row]
    }
}

/// Input cochains for time bin `j`: raw counts of columns `j..j+n_col` on the
/// vertices, and for `k >= 1` a 0/1 indicator of simplices whose vertices are
/// all active in column `j`.
pub fn cochain_from_bin(
    s: &SimplicialComplex,
    a: &SpikeCountMatrix,
    b: &BinaryMatrix,
    j: usize,
    n_col: usize,
) -> Result<Vec<Cochain>> {
    if n_col == 0 {
        return Err(Error::InvalidArgument("n_col must be at least 1".into()));
    }
    if j + n_col > a.n_bins() || j >= b.n_bins() {
        return Err(Error::OutOfRange {
            what: "bin window end",
            index: j + n_col,
            limit: a.n_bins(),
        });
    }
    if a.n_neurons() != s.n_vertices() || b.n_neurons() != s.n_vertices() {
        return Err(Error::DimensionMismatch {
            what: "neuron count",
            expected: s.n_vertices(),
            got: a.n_neurons(),
        });
    }
    let n0 = s.count(0);
    let x0 = (j..j + n_col)
        .map(|c| (0..n0).map(|i| a.get(i, c) as f64).collect())
        .collect();
    let mut out = vec![Cochain {
        dim: 0,
        n_rows: n0,
        columns: x0,
    }];
    let active = b.active(j);
    for k in 1..=s.max_dim() {
        let mut x = vec![0.0; s.count(k)];
        for i in s.covered(k, &active) {
            x[i] = 1.0;
        }
        out.push(Cochain {
            dim: k,
            n_rows: s.count(k),
            columns: vec![x],
        });
    }
    Ok(out)
}
