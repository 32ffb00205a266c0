//! Graph models, sparse adjacency operators and finite-volume exhaustions.
//!
//! Vertices of a comb `G ⊣ H` are indexed row-major over `(base, fiber)`:
//! index `g·|H| + h`. Torus coordinates `−n..=n` are folded to `0..2n+1`
//! by `c mod (2n+1)`, so the origin always has index 0.

use std::fmt;

use crate::error::{invalid, Error, Result};

/// Catalog of graphs handled by the toolkit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphModel {
    /// Path `S_n` on vertices `0..=n`.
    SegmentN(usize),
    /// Discrete torus `T^d_{2n+1}`.
    TorusZd { d: usize, n: usize },
    /// Half line ℕ.
    HalfLineN,
    /// Line ℤ.
    LineZ,
    /// Lattice ℤ^d.
    LatticeZd(usize),
    /// Comb ℕ ⊣ ℤ^d: a copy of ℤ^d hangs from every vertex of ℕ.
    NComb(usize),
    /// Comb ℤ^d ⊣ ℤ: a copy of ℤ hangs from every vertex of ℤ^d.
    ZComb(usize),
}

impl GraphModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            GraphModel::SegmentN(0) => invalid("segment S_n needs n >= 1"),
            GraphModel::TorusZd { d, n } if d == 0 || n == 0 => {
                invalid("torus T^d_{2n+1} needs d >= 1 and n >= 1")
            }
            GraphModel::LatticeZd(0) | GraphModel::NComb(0) | GraphModel::ZComb(0) => {
                invalid("dimension must be at least 1")
            }
            _ => Ok(()),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, GraphModel::SegmentN(_) | GraphModel::TorusZd { .. })
    }

    pub fn is_comb(&self) -> bool {
        matches!(self, GraphModel::NComb(_) | GraphModel::ZComb(_))
    }

    /// Dimension of a homogeneous lattice model (ℤ counts as ℤ¹).
    pub fn lattice_dim(&self) -> Option<usize> {
        match *self {
            GraphModel::LineZ => Some(1),
            GraphModel::LatticeZd(d) => Some(d),
            _ => None,
        }
    }

    /// Base and fiber of a comb model.
    pub fn comb_parts(&self) -> Option<(GraphModel, GraphModel)> {
        match *self {
            GraphModel::NComb(d) => Some((GraphModel::HalfLineN, GraphModel::LatticeZd(d))),
            GraphModel::ZComb(d) => Some((GraphModel::LatticeZd(d), GraphModel::LineZ)),
            _ => None,
        }
    }

    /// Dimension of the lattice whose spectrum the model's integrated
    /// density of states follows: the fiber for combs, ℤ for ℕ.
    pub fn spectral_lattice_dim(&self) -> Option<usize> {
        match *self {
            GraphModel::HalfLineN | GraphModel::LineZ => Some(1),
            GraphModel::LatticeZd(d) | GraphModel::NComb(d) => Some(d),
            GraphModel::ZComb(_) => Some(1),
            _ => None,
        }
    }

    /// Neighbors of a site of an infinite catalog model, each listed once
    /// per edge.
    pub fn neighbors(&self, site: &Site) -> Result<Vec<Site>> {
        let shifts = |c: &[i64]| -> Vec<Vec<i64>> {
            let mut out = Vec::with_capacity(2 * c.len());
            for j in 0..c.len() {
                for s in [-1, 1] {
                    let mut v = c.to_vec();
                    v[j] += s;
                    out.push(v);
                }
            }
            out
        };
        let half_line = |k: i64| -> Vec<i64> { if k > 0 { vec![k - 1, k + 1] } else { vec![k + 1] } };
        let bad = || Error::Invalid(format!("site {site:?} is not a vertex of {self}"));
        match *self {
            GraphModel::HalfLineN if site.base.len() == 1 && site.base[0] >= 0 => {
                Ok(half_line(site.base[0]).into_iter().map(|k| Site::point(&[k])).collect())
            }
            GraphModel::LineZ | GraphModel::LatticeZd(_) if Some(site.base.len()) == self.lattice_dim() => {
                Ok(shifts(&site.base).iter().map(|c| Site::point(c)).collect())
            }
            GraphModel::NComb(d) if site.base.len() == 1 && site.base[0] >= 0 && site.fiber.len() == d => {
                let mut out: Vec<Site> = shifts(&site.fiber).iter().map(|f| Site::new(&site.base, f)).collect();
                if site.fiber.iter().all(|&c| c == 0) {
                    out.extend(half_line(site.base[0]).into_iter().map(|k| Site::new(&[k], &site.fiber)));
                }
                Ok(out)
            }
            GraphModel::ZComb(d) if site.base.len() == d && site.fiber.len() == 1 => {
                let mut out: Vec<Site> = shifts(&site.fiber).iter().map(|f| Site::new(&site.base, f)).collect();
                if site.fiber[0] == 0 {
                    out.extend(shifts(&site.base).iter().map(|b| Site::new(b, &site.fiber)));
                }
                Ok(out)
            }
            _ => Err(bad()),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let args = |inner: &str| -> Result<Vec<usize>> {
            inner
                .split(',')
                .map(|p| {
                    p.parse::<usize>()
                        .map_err(|_| Error::Invalid(format!("bad model argument '{p}' in '{s}'")))
                })
                .collect()
        };
        let call = |name: &str| -> Option<&str> {
            t.strip_prefix(name)
                .and_then(|r| r.strip_prefix('('))
                .and_then(|r| r.strip_suffix(')'))
        };
        let one = |v: Vec<usize>| -> Result<usize> {
            if v.len() == 1 {
                Ok(v[0])
            } else {
                invalid(format!("model '{s}' takes one argument"))
            }
        };
        let model = match t.as_str() {
            "N" | "HalfLineN" => GraphModel::HalfLineN,
            "Z" | "LineZ" => GraphModel::LineZ,
            _ => {
                if let Some(a) = call("NComb") {
                    GraphModel::NComb(one(args(a)?)?)
                } else if let Some(a) = call("ZComb") {
                    GraphModel::ZComb(one(args(a)?)?)
                } else if let Some(a) = call("LatticeZd") {
                    GraphModel::LatticeZd(one(args(a)?)?)
                } else if let Some(a) = call("SegmentN").or_else(|| call("Segment")) {
                    GraphModel::SegmentN(one(args(a)?)?)
                } else if let Some(a) = call("TorusZd").or_else(|| call("Torus")) {
                    let v = args(a)?;
                    if v.len() != 2 {
                        return invalid(format!("model '{s}' takes (d, n)"));
                    }
                    GraphModel::TorusZd { d: v[0], n: v[1] }
                } else if let Some(d) = t.strip_prefix("Z^").or_else(|| t.strip_prefix('Z')) {
                    GraphModel::LatticeZd(
                        d.parse()
                            .map_err(|_| Error::Invalid(format!("unknown model '{s}'")))?,
                    )
                } else {
                    return invalid(format!("unknown model '{s}'"));
                }
            }
        };
        model.validate()?;
        Ok(model)
    }
}

impl fmt::Display for GraphModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GraphModel::SegmentN(n) => write!(f, "SegmentN({n})"),
            GraphModel::TorusZd { d, n } => write!(f, "TorusZd({d},{n})"),
            GraphModel::HalfLineN => write!(f, "N"),
            GraphModel::LineZ => write!(f, "Z"),
            GraphModel::LatticeZd(d) => write!(f, "Z^{d}"),
            GraphModel::NComb(d) => write!(f, "NComb({d})"),
            GraphModel::ZComb(d) => write!(f, "ZComb({d})"),
        }
    }
}

/// Vertex label. For combs `base` and `fiber` hold the two coordinates;
/// for ℕ, ℤ^d and finite models only `base` is used.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Site {
    pub base: Vec<i64>,
    pub fiber: Vec<i64>,
}

impl Site {
    pub fn new(base: &[i64], fiber: &[i64]) -> Self {
        Site {
            base: base.to_vec(),
            fiber: fiber.to_vec(),
        }
    }

    pub fn point(coords: &[i64]) -> Self {
        Site::new(coords, &[])
    }

    /// The root of `model`: 0 on ℕ and segments, the origin elsewhere.
    pub fn root(model: &GraphModel) -> Self {
        match *model {
            GraphModel::HalfLineN | GraphModel::SegmentN(_) | GraphModel::LineZ => {
                Site::point(&[0])
            }
            GraphModel::LatticeZd(d) | GraphModel::TorusZd { d, .. } => Site::point(&vec![0; d]),
            GraphModel::NComb(d) => Site::new(&[0], &vec![0; d]),
            GraphModel::ZComb(d) => Site::new(&vec![0; d], &[0]),
        }
    }
}

/// Symmetric adjacency operator with nonnegative integer entries in CSR form.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<u32>,
}

impl SparseOperator {
    /// Builds from undirected edges `(i, j, multiplicity)`; `i == j` adds a
    /// diagonal entry. Repeated edges accumulate.
    pub fn from_edges(n: usize, edges: &[(usize, usize, u32)]) -> Result<Self> {
        let mut rows: Vec<Vec<(usize, u32)>> = vec![Vec::new(); n];
        for &(i, j, m) in edges {
            if i >= n || j >= n {
                return invalid(format!("edge ({i},{j}) out of range for {n} vertices"));
            }
            if m == 0 {
                continue;
            }
            rows[i].push((j, m));
            if i != j {
                rows[j].push((i, m));
            }
        }
        Ok(Self::from_row_lists(rows))
    }

    fn from_row_lists(rows: Vec<Vec<(usize, u32)>>) -> Self {
        let n = rows.len();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            row.sort_unstable_by_key(|e| e.0);
            let mut last: Option<usize> = None;
            for (c, m) in row {
                if last == Some(c) {
                    *vals.last_mut().unwrap() += m;
                } else {
                    cols.push(c);
                    vals.push(m);
                    last = Some(c);
                }
            }
            row_ptr.push(cols.len());
        }
        SparseOperator {
            n,
            row_ptr,
            cols,
            vals,
        }
    }

    /// Builds row by row; `fill(i, out)` pushes the entries of row `i`.
    /// The caller is responsible for symmetry.
    fn from_row_fn(n: usize, mut fill: impl FnMut(usize, &mut Vec<(usize, u32)>)) -> Self {
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        let mut buf = Vec::new();
        row_ptr.push(0);
        for i in 0..n {
            buf.clear();
            fill(i, &mut buf);
            buf.sort_unstable_by_key(|e| e.0);
            let start = cols.len();
            for &(c, m) in &buf {
                if cols.len() > start && *cols.last().unwrap() == c {
                    *vals.last_mut().unwrap() += m;
                } else {
                    cols.push(c);
                    vals.push(m);
                }
            }
            row_ptr.push(cols.len());
        }
        SparseOperator {
            n,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, u32)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn entry(&self, i: usize, j: usize) -> u32 {
        self.row(i).find(|e| e.0 == j).map_or(0, |e| e.1)
    }

    /// `y = A x`, summing each row in column order.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        if x.len() != self.n || y.len() != self.n {
            return invalid(format!(
                "matvec length mismatch: operator {}, x {}, y {}",
                self.n,
                x.len(),
                y.len()
            ));
        }
        self.matvec_unchecked(x, y);
        Ok(())
    }

    pub(crate) fn matvec_unchecked(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut s = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.vals[k] as f64 * x[self.cols[k]];
            }
            *yi = s;
        }
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut y = vec![0.0; self.n];
        self.matvec(x, &mut y)?;
        Ok(y)
    }

    /// Largest row sum, an upper bound for the spectral radius.
    pub fn max_row_sum(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).map(|e| e.1 as f64).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Number of edges counted with multiplicity; loops count once.
    pub fn edge_count(&self) -> u64 {
        let mut total = 0u64;
        for i in 0..self.n {
            for (j, m) in self.row(i) {
                if j >= i {
                    total += m as u64;
                }
            }
        }
        total
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| self.row(i).all(|(j, m)| self.entry(j, i) == m))
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut a = vec![0.0; self.n * self.n];
        for i in 0..self.n {
            for (j, m) in self.row(i) {
                a[i * self.n + j] = m as f64;
            }
        }
        a
    }

    /// Text dump: one line `index: neighbor*multiplicity, …` per vertex.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            out.push_str(&i.to_string());
            out.push(':');
            let parts: Vec<String> = self.row(i).map(|(j, m)| format!("{j}*{m}")).collect();
            if !parts.is_empty() {
                out.push(' ');
                out.push_str(&parts.join(", "));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let (idx, rest) = line
                .split_once(':')
                .ok_or_else(|| Error::Invalid(format!("line {}: missing ':'", lineno + 1)))?;
            let idx: usize = idx
                .trim()
                .parse()
                .map_err(|_| Error::Invalid(format!("line {}: bad index", lineno + 1)))?;
            if idx != rows.len() {
                return invalid(format!("line {}: expected index {}", lineno + 1, rows.len()));
            }
            let mut row = Vec::new();
            for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let (j, m) = item.split_once('*').ok_or_else(|| {
                    Error::Invalid(format!("line {}: bad entry '{item}'", lineno + 1))
                })?;
                let j: usize = j.trim().parse().map_err(|_| {
                    Error::Invalid(format!("line {}: bad neighbor '{item}'", lineno + 1))
                })?;
                let m: u32 = m.trim().parse().map_err(|_| {
                    Error::Invalid(format!("line {}: bad multiplicity '{item}'", lineno + 1))
                })?;
                row.push((j, m));
            }
            rows.push(row);
        }
        let n = rows.len();
        if rows.iter().flatten().any(|e| e.0 >= n) {
            return invalid("neighbor index out of range");
        }
        let op = Self::from_row_lists(rows);
        if !op.is_symmetric() {
            return invalid("adjacency dump is not symmetric");
        }
        Ok(op)
    }
}

/// Adjacency of the path `S_n` on `n + 1` vertices.
pub fn build_segment(n: usize) -> Result<SparseOperator> {
    if n == 0 {
        return invalid("segment S_n needs n >= 1");
    }
    Ok(SparseOperator::from_row_fn(n + 1, |i, out| {
        if i > 0 {
            out.push((i - 1, 1));
        }
        if i < n {
            out.push((i + 1, 1));
        }
    }))
}

/// Adjacency of the torus `T^d_{2n+1}`.
pub fn build_torus(d: usize, n: usize) -> Result<SparseOperator> {
    if d == 0 || n == 0 {
        return invalid("torus T^d_{2n+1} needs d >= 1 and n >= 1");
    }
    let side = 2 * n + 1;
    let total = side
        .checked_pow(d as u32)
        .ok_or_else(|| Error::Invalid("torus too large".into()))?;
    Ok(SparseOperator::from_row_fn(total, |i, out| {
        let mut stride = 1;
        for _ in 0..d {
            let c = (i / stride) % side;
            let up = (c + 1) % side;
            let down = (c + side - 1) % side;
            out.push((i - c * stride + up * stride, 1));
            out.push((i - c * stride + down * stride, 1));
            stride *= side;
        }
    }))
}

/// Adjacency `A_G ⊗ P_o + I ⊗ A_H` of the comb `G ⊣ (H, o)`.
pub fn build_comb(base: &SparseOperator, fiber: &SparseOperator, root: usize) -> Result<SparseOperator> {
    let h = fiber.dim();
    if root >= h {
        return invalid(format!("root {root} outside fiber of size {h}"));
    }
    let total = base
        .dim()
        .checked_mul(h)
        .ok_or_else(|| Error::Invalid("comb too large".into()))?;
    Ok(SparseOperator::from_row_fn(total, |i, out| {
        let (g, f) = (i / h, i % h);
        for (f2, m) in fiber.row(f) {
            out.push((g * h + f2, m));
        }
        if f == root {
            for (g2, m) in base.row(g) {
                out.push((g2 * h + root, m));
            }
        }
    }))
}

/// Row-major torus index of coordinates in `−n..=n` (folded modulo `2n+1`).
pub fn torus_index(coords: &[i64], n: usize) -> usize {
    let side = (2 * n + 1) as i64;
    let mut idx = 0usize;
    let mut stride = 1usize;
    for &c in coords {
        idx += c.rem_euclid(side) as usize * stride;
        stride *= side as usize;
    }
    idx
}

/// Inverse of [`torus_index`], returning coordinates in `−n..=n`.
pub fn torus_coords(mut idx: usize, d: usize, n: usize) -> Vec<i64> {
    let side = 2 * n + 1;
    let mut out = Vec::with_capacity(d);
    for _ in 0..d {
        let c = (idx % side) as i64;
        out.push(if c > n as i64 { c - side as i64 } else { c });
        idx /= side;
    }
    out
}

/// Finite-volume approximation `Λ_n` of a model.
///
/// ℕ → `S_n`, ℤ^d → `T^d_{2n+1}`, ℕ⊣ℤ^d → `S_n ⊣ T^d_{2n+1}`,
/// ℤ^d⊣ℤ → `T^d_{2n+1} ⊣ T_{2n+1}`. Finite models are their own exhaustion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exhaustion {
    pub model: GraphModel,
    pub n: usize,
}

impl Exhaustion {
    pub fn new(model: GraphModel, n: usize) -> Result<Self> {
        model.validate()?;
        if n == 0 && !model.is_finite() {
            return invalid("exhaustion index n must be at least 1");
        }
        Ok(Exhaustion { model, n })
    }

    fn side(&self) -> usize {
        2 * self.n + 1
    }

    /// Sizes of the base and fiber factors (fiber size 1 for non-combs).
    pub fn factor_sizes(&self) -> (usize, usize) {
        let side = self.side();
        match self.model {
            GraphModel::SegmentN(m) => (m + 1, 1),
            GraphModel::TorusZd { d, n } => ((2 * n + 1).pow(d as u32), 1),
            GraphModel::HalfLineN => (self.n + 1, 1),
            GraphModel::LineZ => (side, 1),
            GraphModel::LatticeZd(d) => (side.pow(d as u32), 1),
            GraphModel::NComb(d) => (self.n + 1, side.pow(d as u32)),
            GraphModel::ZComb(d) => (side.pow(d as u32), side),
        }
    }

    pub fn vertex_count(&self) -> usize {
        let (b, f) = self.factor_sizes();
        b * f
    }

    pub fn operator(&self) -> Result<SparseOperator> {
        match self.model {
            GraphModel::SegmentN(m) => build_segment(m),
            GraphModel::TorusZd { d, n } => build_torus(d, n),
            GraphModel::HalfLineN => build_segment(self.n),
            GraphModel::LineZ => build_torus(1, self.n),
            GraphModel::LatticeZd(d) => build_torus(d, self.n),
            GraphModel::NComb(d) => build_comb(&build_segment(self.n)?, &build_torus(d, self.n)?, 0),
            GraphModel::ZComb(d) => build_comb(&build_torus(d, self.n)?, &build_torus(1, self.n)?, 0),
        }
    }

    pub fn index_of(&self, site: &Site) -> Result<usize> {
        let n = self.n as i64;
        let in_box = |c: &[i64], bound: i64| c.iter().all(|x| x.abs() <= bound);
        let bad = || Error::Invalid(format!("site {site:?} outside Λ_{} of {}", self.n, self.model));
        let segment = |k: i64, m: i64| if (0..=m).contains(&k) { Ok(k as usize) } else { Err(bad()) };
        match self.model {
            GraphModel::SegmentN(m) if site.base.len() == 1 && site.fiber.is_empty() => {
                segment(site.base[0], m as i64)
            }
            GraphModel::HalfLineN if site.base.len() == 1 && site.fiber.is_empty() => segment(site.base[0], n),
            GraphModel::TorusZd { d, n: tn } if site.base.len() == d && site.fiber.is_empty() => {
                if in_box(&site.base, tn as i64) {
                    Ok(torus_index(&site.base, tn))
                } else {
                    Err(bad())
                }
            }
            GraphModel::LineZ | GraphModel::LatticeZd(_)
                if Some(site.base.len()) == self.model.lattice_dim() && site.fiber.is_empty() =>
            {
                if in_box(&site.base, n) {
                    Ok(torus_index(&site.base, self.n))
                } else {
                    Err(bad())
                }
            }
            GraphModel::NComb(d) if site.base.len() == 1 && site.fiber.len() == d => {
                let j = segment(site.base[0], n)?;
                if !in_box(&site.fiber, n) {
                    return Err(bad());
                }
                Ok(j * self.factor_sizes().1 + torus_index(&site.fiber, self.n))
            }
            GraphModel::ZComb(d) if site.base.len() == d && site.fiber.len() == 1 => {
                if !in_box(&site.base, n) || !in_box(&site.fiber, n) {
                    return Err(bad());
                }
                Ok(torus_index(&site.base, self.n) * self.factor_sizes().1 + torus_index(&site.fiber, self.n))
            }
            _ => Err(bad()),
        }
    }
}

/// Ratio `|E Y_n \ E X_n| / |V X_n|` of edges added when the disjoint open
/// fiber cubes `X_n` are glued into the comb `Y_n`.
pub fn perturbation_density(model: &GraphModel, n: usize) -> Result<f64> {
    if n == 0 {
        return invalid("n must be at least 1");
    }
    let side = (2 * n + 1) as f64;
    let (base_vertices, base_edges, fiber_dim) = match *model {
        GraphModel::NComb(d) => ((n + 1) as f64, n as f64, d),
        GraphModel::ZComb(d) => {
            let v = side.powi(d as i32);
            (v, d as f64 * v, 1)
        }
        _ => return invalid(format!("{model} is not a comb model")),
    };
    // the torus fiber has f·N^{f-1} more edges than the open cube S^f_n
    let f = fiber_dim as i32;
    let added = base_vertices * fiber_dim as f64 * side.powi(f - 1) + base_edges;
    Ok(added / (base_vertices * side.powi(f)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_and_torus_shapes() {
        let s = build_segment(3).unwrap();
        assert_eq!(s.dim(), 4);
        assert_eq!(s.edge_count(), 3);
        assert!(build_segment(0).is_err());
        let t = build_torus(2, 2).unwrap();
        assert_eq!(t.dim(), 25);
        assert_eq!(t.edge_count(), 50);
        assert!((0..25).all(|i| t.row(i).map(|e| e.1).sum::<u32>() == 4));
    }

    #[test]
    fn comb_degrees() {
        let y = Exhaustion::new(GraphModel::NComb(1), 2).unwrap().operator().unwrap();
        assert_eq!(y.dim(), 15);
        assert!(y.is_symmetric());
        // root of base vertex 1 has two fiber and two base neighbours
        assert_eq!(y.row(5).count(), 4);
        assert_eq!(y.entry(0, 5), 1);
        assert_eq!(y.entry(1, 6), 0);
    }

    #[test]
    fn text_round_trip() {
        let op = SparseOperator::from_edges(3, &[(0, 1, 2), (1, 2, 1), (2, 2, 1)]).unwrap();
        let text = op.to_text();
        assert_eq!(text, "0: 1*2\n1: 0*2, 2*1\n2: 1*1, 2*1\n");
        assert_eq!(SparseOperator::from_text(&text).unwrap(), op);
    }

    #[test]
    fn matvec_rejects_mismatch() {
        let op = build_segment(2).unwrap();
        assert!(op.apply(&[1.0, 1.0]).is_err());
        assert_eq!(op.apply(&[1.0, 2.0, 3.0]).unwrap(), vec![2.0, 4.0, 2.0]);
    }

    #[test]
    fn perturbation_density_examples() {
        let r = perturbation_density(&GraphModel::ZComb(1), 1).unwrap();
        assert!((r - 2.0 / 3.0).abs() < 1e-15);
        let r = perturbation_density(&GraphModel::NComb(1), 10).unwrap();
        assert!((r - 21.0 / 231.0).abs() < 1e-15);
        assert!(perturbation_density(&GraphModel::LineZ, 3).is_err());
    }

    #[test]
    fn torus_index_round_trip() {
        for i in 0..125 {
            assert_eq!(torus_index(&torus_coords(i, 3, 2), 2), i);
        }
        assert_eq!(torus_index(&[-1], 2), 4);
    }

    #[test]
    fn parse_models() {
        assert_eq!(GraphModel::parse("ZComb(1)").unwrap(), GraphModel::ZComb(1));
        assert_eq!(GraphModel::parse("Z^3").unwrap(), GraphModel::LatticeZd(3));
        assert_eq!(GraphModel::parse("N").unwrap(), GraphModel::HalfLineN);
        assert_eq!(GraphModel::parse("Torus(2,3)").unwrap(), GraphModel::TorusZd { d: 2, n: 3 });
        assert!(GraphModel::parse("NComb(0)").is_err());
        assert!(GraphModel::parse("Q").is_err());
        for m in [GraphModel::NComb(2), GraphModel::LatticeZd(4), GraphModel::SegmentN(5)] {
            assert_eq!(GraphModel::parse(&m.to_string()).unwrap(), m);
        }
    }
}
