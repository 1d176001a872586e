//! Modules given by generator matrices: standard (cell) modules, the column
//! modules of D_n built from K[X]/(p), self-extensions, uniserial modules,
//! primary decompositions, blocks and restriction to Temperley-Lieb.

use crate::algebra::{diagram_of, halves_of, Algebra, AlgebraSpec, FdAlgebra, Family, Half};
use crate::cellular::{CellDatum, Weight};
use crate::diagrams::{enumerate_lifted, AffineDiagram};
use crate::error::{Error, Result};
use crate::homext::{find_isomorphism, hom_space};
use crate::involutions::{enumerate_annular, r_offset};
use crate::linalg::{unit, Matrix, Subspace, Vector};
use crate::scalars::{g_basis, roots_of_poly, Field, FieldKind, Poly, RootData, Scalar};
use serde_json::{json, Value};
use std::sync::Arc;

/// A finite-dimensional module: one matrix per named generator. Vectors are
/// columns; matrices act on the left.
#[derive(Clone, Debug, PartialEq)]
pub struct Module {
    pub field: Field,
    pub dim: usize,
    pub names: Vec<String>,
    pub gens: Vec<Matrix>,
}

impl Module {
    pub fn new(field: &Field, dim: usize, names: Vec<String>, gens: Vec<Matrix>) -> Module {
        Module { field: field.clone(), dim, names, gens }
    }

    pub fn gen(&self, name: &str) -> Option<&Matrix> {
        self.names.iter().position(|n| n == name).map(|i| &self.gens[i])
    }

    /// The submodule spanned by `basis`, in those coordinates.
    pub fn restrict(&self, basis: &[Vector]) -> Result<Module> {
        let f = &self.field;
        let b = Matrix::from_cols(f, basis, self.dim);
        let mut gens = vec![];
        for g in &self.gens {
            let mut cols = vec![];
            for v in basis {
                let img = g.mul_vec(f, v);
                cols.push(b.solve(f, &img).ok_or_else(|| Error::HypothesisFailed("subspace is not invariant".into()))?);
            }
            gens.push(Matrix::from_cols(f, &cols, basis.len()));
        }
        Ok(Module::new(f, basis.len(), self.names.clone(), gens))
    }

    /// The quotient by the span of `sub` (which must be invariant), on the
    /// coordinates complementary to its pivots.
    pub fn quotient(&self, sub: &[Vector]) -> Result<Module> {
        let f = &self.field;
        let s = Subspace::span(f, self.dim, sub.to_vec());
        for g in &self.gens {
            for v in &s.basis {
                if !s.contains(f, &g.mul_vec(f, v)) {
                    return Err(Error::HypothesisFailed("quotient by a non-invariant subspace".into()));
                }
            }
        }
        let comp = s.complement_indices();
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let cols: Vec<Vector> = comp
                    .iter()
                    .map(|&c| {
                        let r = s.reduce(f, &g.col(c));
                        comp.iter().map(|&i| r[i].clone()).collect()
                    })
                    .collect();
                Matrix::from_cols(f, &cols, comp.len())
            })
            .collect();
        Ok(Module::new(f, comp.len(), self.names.clone(), gens))
    }

    pub fn direct_sum(&self, o: &Module) -> Result<Module> {
        if self.names != o.names {
            return Err(Error::SpecMismatch("modules over different generator lists".into()));
        }
        let f = &self.field;
        let gens = self
            .gens
            .iter()
            .zip(&o.gens)
            .map(|(a, b)| Matrix::block(f, a, &Matrix::zeros(f, a.rows, b.cols), &Matrix::zeros(f, b.rows, a.cols), b))
            .collect();
        Ok(Module::new(f, self.dim + o.dim, self.names.clone(), gens))
    }

    /// Keeps the named generators only.
    pub fn select(&self, names: &[String]) -> Result<Module> {
        let gens = names
            .iter()
            .map(|n| self.gen(n).cloned().ok_or_else(|| Error::SpecMismatch(format!("no generator {n}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Module::new(&self.field, self.dim, names.to_vec(), gens))
    }

    /// Smallest invariant subspace containing the vectors.
    pub fn spin(&self, vecs: &[Vector]) -> Vec<Vector> {
        let f = &self.field;
        let mut ech = crate::linalg::Echelon::new(self.dim);
        let mut out: Vec<Vector> = vec![];
        for v in vecs {
            if ech.insert(f, v.clone()) {
                out.push(v.clone());
            }
        }
        let mut i = 0;
        while i < out.len() {
            for g in &self.gens {
                let w = g.mul_vec(f, &out[i]);
                if ech.insert(f, w.clone()) {
                    out.push(w);
                }
            }
            i += 1;
        }
        out
    }

    /// Absolute irreducibility: the generators span the full matrix algebra.
    pub fn is_simple(&self) -> bool {
        let f = &self.field;
        let d = self.dim;
        if d == 0 {
            return false;
        }
        let flat = |m: &Matrix| -> Vector { m.data.clone() };
        let mut ech = crate::linalg::Echelon::new(d * d);
        let id = Matrix::identity(f, d);
        ech.insert(f, flat(&id));
        let mut found = vec![id];
        let mut i = 0;
        while i < found.len() && ech.dim() < d * d {
            for g in &self.gens {
                let m = found[i].mul(f, g);
                if ech.insert(f, flat(&m)) {
                    found.push(m);
                }
            }
            i += 1;
        }
        ech.dim() == d * d
    }

    /// Checks the defining relations of D_n (or the sub-presentation matching
    /// the generator names) on the matrices.
    pub fn check_relations(&self, n: usize) -> Vec<String> {
        let f = &self.field;
        let mut fails = vec![];
        let e = |i: usize| self.gen(&format!("E{}", (i + n - 1) % n + 1));
        let delta = f.delta();
        let id = Matrix::identity(f, self.dim);
        let mul = |a: &Matrix, b: &Matrix| a.mul(f, b);
        for i in 1..=n {
            let Some(ei) = e(i) else { continue };
            if mul(ei, ei) != ei.scale(f, &delta) {
                fails.push(format!("E{i}^2 != delta E{i}"));
            }
            for j in 1..=n {
                let adjacent = i % n + 1 == j || j % n + 1 == i;
                if i != j && !adjacent && mul(ei, e(j).unwrap()) != mul(e(j).unwrap(), ei) {
                    fails.push(format!("E{i} E{j} != E{j} E{i}"));
                }
            }
            for j in [i + 1, i + n - 1] {
                let ej = e(j).unwrap();
                if mul(&mul(ei, ej), ei) != *ei {
                    fails.push(format!("E{i} E{} E{i} != E{i}", (j - 1) % n + 1));
                }
            }
        }
        if let (Some(u), Some(ui)) = (self.gen("u"), self.gen("u^-1")) {
            if mul(u, ui) != id || mul(ui, u) != id {
                fails.push("u u^-1 != 1".into());
            }
            for i in 1..=n {
                if mul(&mul(u, e(i).unwrap()), ui) != *e(i + 1).unwrap() {
                    fails.push(format!("u E{i} u^-1 != E{}", i % n + 1));
                }
            }
            let ue1 = mul(u, e(1).unwrap());
            if ue1.pow(f, n - 1) != mul(&u.pow(f, n), &ue1) {
                fails.push("(u E1)^(n-1) != u^n (u E1)".into());
            }
        }
        if let (Some(u2), Some(ui2)) = (self.gen("u^2"), self.gen("u^-2")) {
            if mul(u2, ui2) != id || mul(ui2, u2) != id {
                fails.push("u^2 u^-2 != 1".into());
            }
            for i in 1..=n {
                if mul(&mul(u2, e(i).unwrap()), ui2) != *e(i + 2).unwrap() {
                    fails.push(format!("u^2 E{i} u^-2 != E{}", (i + 1) % n + 1));
                }
            }
        }
        fails
    }

    /// The matrix of u^n (from u, or from u^2 when n is even).
    pub fn u_to_n(&self, n: usize) -> Result<Matrix> {
        let f = &self.field;
        if let Some(u) = self.gen("u") {
            return Ok(u.pow(f, n));
        }
        if let (Some(u2), true) = (self.gen("u^2"), n % 2 == 0) {
            return Ok(u2.pow(f, n / 2));
        }
        Err(Error::SpecMismatch("u^n is not available from these generators".into()))
    }

    pub fn to_json(&self) -> Value {
        let f = &self.field;
        json!({
            "field": field_header(f),
            "dim": self.dim,
            "generators": self.names.iter().zip(&self.gens).map(|(n, m)| json!({
                "name": n,
                "matrix": (0..m.rows).map(|i| (0..m.cols).map(|j| f.to_json(m.get(i, j))).collect::<Vec<_>>()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Module> {
        let bad = |m: &str| Error::Parse(format!("module JSON: {m}"));
        let f = field_from_header(v.get("field").ok_or_else(|| bad("missing field"))?)?;
        let dim = v.get("dim").and_then(|d| d.as_u64()).ok_or_else(|| bad("missing dim"))? as usize;
        let mut names = vec![];
        let mut gens = vec![];
        for g in v.get("generators").and_then(|g| g.as_array()).ok_or_else(|| bad("missing generators"))? {
            names.push(g.get("name").and_then(|n| n.as_str()).ok_or_else(|| bad("generator name"))?.to_string());
            let rows = g.get("matrix").and_then(|m| m.as_array()).ok_or_else(|| bad("generator matrix"))?;
            let mut data = vec![];
            for r in rows {
                let r = r.as_array().ok_or_else(|| bad("matrix row"))?;
                if r.len() != dim {
                    return Err(Error::SizeMismatch("matrix row length".into()));
                }
                data.push(r.iter().map(|x| f.from_json(x)).collect::<Result<Vec<_>>>()?);
            }
            if data.len() != dim {
                return Err(Error::SizeMismatch("matrix row count".into()));
            }
            gens.push(Matrix::from_rows(data, dim));
        }
        Ok(Module::new(&f, dim, names, gens))
    }
}

pub fn field_header(f: &Field) -> Value {
    json!({ "kind": f.kind().to_string(), "v": f.fmt(&f.v()) })
}

pub fn field_from_header(v: &Value) -> Result<Field> {
    let kind = v.get("kind").and_then(|k| k.as_str()).ok_or_else(|| Error::Parse("field header needs `kind`".into()))?;
    let val = v.get("v").and_then(|k| k.as_str());
    let k = FieldKind::parse(kind)?;
    match (k, val) {
        (FieldKind::RationalFunctions, Some("v")) | (_, None) => Field::parse(kind, None),
        (_, Some("1")) => Field::parse(kind, None),
        (_, Some(e)) => Field::parse(kind, Some(e)),
    }
}

/// Images of all presentation words of a finite algebra under a module.
/// The module's generator list must match the algebra's.
pub fn word_images(fd: &FdAlgebra, m: &Module) -> Vec<Matrix> {
    fd.presentation().word_images(&m.field, m.dim, &m.gens)
}

/// rho(x) for an algebra vector x, given the word images.
pub fn action_of(fd: &FdAlgebra, images: &[Matrix], x: &[Scalar]) -> Matrix {
    let f = &fd.field;
    let c = fd.presentation().express.mul_vec(f, x);
    let d = images[0].rows;
    let mut out = Matrix::zeros(f, d, d);
    for (w, cw) in c.iter().enumerate() {
        if !f.is_zero(cw) {
            out = out.add(f, &images[w].scale(f, cw));
        }
    }
    out
}

/// Whether the module is a module for the finite algebra: every presentation
/// relation holds and each listed generator agrees with its expression in the
/// minimal generators.
pub fn is_module_for(fd: &FdAlgebra, m: &Module) -> bool {
    let f = &m.field;
    if m.gens.len() != fd.gens.len() {
        return false;
    }
    let pres = fd.presentation();
    let images = word_images(fd, m);
    for (b, g, rhs) in &pres.relations {
        let lhs = images[*b].mul(f, &m.gens[pres.gens[*g]]);
        let mut r = Matrix::zeros(f, m.dim, m.dim);
        for (i, c) in rhs {
            r = r.add(f, &images[*i].scale(f, c));
        }
        if lhs != r {
            return false;
        }
    }
    fd.gens.iter().zip(&m.gens).all(|((_, v), g)| action_of(fd, &images, v) == *g)
}

/// A cell module W(lambda) with its fixed right index.
#[derive(Clone)]
pub struct StandardModule {
    pub weight: Weight,
    pub layer: usize,
    pub t: usize,
    pub root: Option<Scalar>,
    pub fixed: usize,
    pub module: Module,
}

/// The matrix of x on W(lambda): x C(l,S,T0) = sum_S' r(S',S) C(l,S',T0) mod lower.
pub fn cell_action(cd: &CellDatum, li: usize, t0: usize, x: &[Scalar]) -> Result<Matrix> {
    let h = cd.m_size(li);
    let f = cd.field();
    let mut cols = vec![];
    for s in 0..h {
        let c = cd.to_c(&cd.alg.mul(x, &cd.c_vector(li, s, t0)?));
        cols.push((0..h).map(|s2| c[cd.c_index(li, s2, t0)].clone()).collect());
    }
    Ok(Matrix::from_cols(f, &cols, h))
}

pub fn standard_module(cd: &CellDatum, w: &Weight) -> Result<StandardModule> {
    let li = cd.layer_index(w)?;
    standard_module_at(cd, li, 0)
}

/// W(lambda) for the layer index, using the half-diagram `t0` as right index.
pub fn standard_module_at(cd: &CellDatum, li: usize, t0: usize) -> Result<StandardModule> {
    let l = &cd.layers[li];
    if l.opaque {
        return Err(Error::RootsNotInField(format!("sector t = {} is unsplit", l.weight.t)));
    }
    let mut names = vec![];
    let mut gens = vec![];
    for (name, v) in &cd.alg.fd.gens {
        names.push(name.clone());
        gens.push(cell_action(cd, li, t0, v)?);
    }
    let module = Module::new(cd.field(), cd.m_size(li), names, gens);
    Ok(StandardModule { weight: l.weight.clone(), layer: li, t: l.weight.t, root: l.root.clone(), fixed: t0, module })
}

/// W(t, alpha): the standard module at the last layer carrying the root alpha.
pub fn standard_module_for_root(cd: &CellDatum, t: usize, alpha: &Scalar) -> Result<StandardModule> {
    standard_module_at(cd, cd.layer_for_root(t, alpha)?, 0)
}

#[derive(Clone, Debug)]
pub struct GramInfo {
    pub matrix: Matrix,
    pub det: Scalar,
    pub rank: usize,
    pub radical_dim: usize,
}

pub fn gram_matrix(cd: &CellDatum, li: usize) -> Result<GramInfo> {
    let f = cd.field();
    let matrix = cd.gram(li)?;
    let det = matrix.det(f);
    let rank = matrix.rank(f);
    let radical_dim = matrix.rows - rank;
    Ok(GramInfo { matrix, det, rank, radical_dim })
}

#[derive(Clone, Debug)]
pub struct SimpleInfo {
    pub weight: Weight,
    pub root: Option<Scalar>,
    pub dim: usize,
}

/// Lambda_0 = {lambda : phi_lambda != 0} with dim L(lambda) = rank phi_lambda.
pub fn classify_simples(cd: &CellDatum) -> Result<Vec<SimpleInfo>> {
    let mut out = vec![];
    for (li, l) in cd.layers.iter().enumerate() {
        if l.opaque {
            continue;
        }
        let g = gram_matrix(cd, li)?;
        if g.rank > 0 {
            out.push(SimpleInfo { weight: l.weight.clone(), root: l.root.clone(), dim: g.rank });
        }
    }
    Ok(out)
}

/// The shift [S1, S2, w] -> [S1, S2, w + 1] on diagrams with t > 0.
pub fn tau_diagram(d: &AffineDiagram) -> Result<AffineDiagram> {
    let (t, h1, h2, w) = halves_of(d);
    if t == 0 {
        return Err(Error::ZeroThroughStrings);
    }
    diagram_of(&h1, &h2, w + 1)
}

/// tau commutes with left and right multiplication by generators on
/// I_t / I_{t-2}: checked on [S1, S2, w] for all halves and |w| <= t.
pub fn tau_commutes(n: usize, t: usize) -> Result<bool> {
    if t == 0 {
        return Err(Error::ZeroThroughStrings);
    }
    let halves = enumerate_annular(n, t)?;
    let gens: Vec<AffineDiagram> = AlgebraSpec::dn(&Field::rationals(), n)?.generator_diagrams().into_iter().map(|x| x.1).collect();
    let tt = t as i64;
    for s1 in &halves {
        for s2 in &halves {
            for w in -tt..=tt {
                let d = AffineDiagram::from_triple(s1, s2, w)?;
                let td = tau_diagram(&d)?;
                for g in &gens {
                    for left in [true, false] {
                        let (a, b) = if left {
                            (AffineDiagram::compose(g, &td)?, AffineDiagram::compose(g, &d)?)
                        } else {
                            (AffineDiagram::compose(&td, g)?, AffineDiagram::compose(&d, g)?)
                        };
                        // both products drop below t together, or tau(gD) = g tau(D)
                        match (a.1.t() == t, b.1.t() == t) {
                            (false, false) => {}
                            (true, true) => {
                                if a.0 != b.0 || a.1 != tau_diagram(&b.1)? {
                                    return Ok(false);
                                }
                            }
                            _ => return Ok(false),
                        }
                    }
                }
            }
        }
    }
    Ok(true)
}

/// On W(lambda) the shift acts as the layer's root: tau C = alpha C modulo lower layers.
pub fn tau_eigen_check(cd: &CellDatum, li: usize) -> Result<bool> {
    let f = cd.field();
    let l = &cd.layers[li];
    if l.weight.t == 0 && !matches!(cd.alg.spec.quotient, crate::algebra::Quotient::ModOmega1PlusUJ(_)) {
        return Err(Error::ZeroThroughStrings);
    }
    let alpha = l.root.clone().ok_or_else(|| Error::RootsNotInField("unsplit layer".into()))?;
    let h = cd.m_size(li);
    for s in 0..h {
        let c = cd.to_c(&cd.alg.tau_vec(&cd.c_vector(li, s, 0)?)?);
        for s2 in 0..h {
            let expect = if s2 == s { alpha.clone() } else { f.zero() };
            if c[cd.c_index(li, s2, 0)] != expect {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Column module span{[S, T0, w]} tensored with K[X]/(p) for an algebra family:
/// the diagram [S, T0, off(S) + step k] is e_S (x) X^k. Products that lose
/// through-strings act as zero.
pub struct ColumnModule {
    pub t: usize,
    pub halves: Vec<Half>,
    pub fixed: usize,
    pub p: Poly,
    pub step: i64,
    pub module: Module,
}

pub fn column_module(spec: &AlgebraSpec, t: usize, fixed: usize, p: &Poly) -> Result<ColumnModule> {
    let f = &spec.field;
    let n = spec.n;
    let deg = p.degree().filter(|&d| d > 0).ok_or_else(|| Error::BadModulus("p must be nonconstant".into()))?;
    let lc = p.coeffs().last().unwrap().clone();
    let p = p.scale(f, &f.inv(&lc)?);
    let halves: Vec<Half> = if t == 0 {
        enumerate_lifted(n)?.into_iter().map(Half::Lift).collect()
    } else {
        enumerate_annular(n, t)?.into_iter().map(Half::Inv).collect()
    };
    let h = halves.len();
    if fixed >= h {
        return Err(Error::IndexOutOfRange(format!("half index {fixed}")));
    }
    let oriented = matches!(spec.family, Family::On | Family::Tl);
    let step = if oriented && t > 0 { 2 } else { 1 };
    let off = |s: &Half| -> Result<i64> {
        match (s, &halves[fixed]) {
            (Half::Inv(a), Half::Inv(b)) if oriented => Ok(r_offset(a, b)? as i64),
            _ => Ok(0),
        }
    };
    let dim = h * deg;
    let mut names = vec![];
    let mut gens = vec![];
    for (name, g) in spec.generator_diagrams() {
        let mut m = Matrix::zeros(f, dim, dim);
        for (si, s) in halves.iter().enumerate() {
            let d = diagram_of(s, &halves[fixed], off(s)?)?;
            let (x, c) = AffineDiagram::compose(&g, &d)?;
            let (t2, h1, h2, w) = halves_of(&c);
            if t2 != t {
                continue;
            }
            debug_assert_eq!(h2, halves[fixed]);
            let s2 = halves.iter().position(|z| *z == h1).unwrap();
            let shift = w - off(&h1)?;
            if shift % step != 0 {
                return Err(Error::ParityViolation(format!("{name} leaves the window")));
            }
            let scale = f.pow(&f.delta(), x as i64)?;
            for k in 0..deg {
                let img = Poly::x_pow_mod(f, k as i64 + shift / step, &p)?;
                for (j, c) in img.coeffs().iter().enumerate() {
                    if !f.is_zero(c) {
                        m.set(s2 * deg + j, si * deg + k, f.mul(c, &scale));
                    }
                }
            }
        }
        names.push(name);
        gens.push(m);
    }
    Ok(ColumnModule { t, halves, fixed, p, step, module: Module::new(f, dim, names, gens) })
}

impl ColumnModule {
    /// The vector e_S (x) g(X).
    pub fn vector(&self, s: usize, g: &Poly) -> Vector {
        let f = &self.module.field;
        let deg = self.p.degree().unwrap();
        let r = g.rem(f, &self.p);
        let mut v = vec![f.zero(); self.module.dim];
        for (k, c) in r.coeffs().iter().enumerate() {
            v[s * deg + k] = c.clone();
        }
        v
    }
    /// The K[X]-submodule g(X) * everything.
    pub fn multiples(&self, g: &Poly) -> Vec<Vector> {
        let deg = self.p.degree().unwrap();
        let mut out = vec![];
        for s in 0..self.halves.len() {
            for k in 0..deg {
                out.push(self.vector(s, &g.mul(&self.module.field, &Poly::monomial(&self.module.field, k))));
            }
        }
        Subspace::span(&self.module.field, self.module.dim, out).basis
    }
    /// Multiplication by X (the shift) as a matrix; it commutes with the action.
    pub fn shift_matrix(&self) -> Matrix {
        let f = &self.module.field;
        let deg = self.p.degree().unwrap();
        let cols: Vec<Vector> = (0..self.module.dim)
            .map(|i| self.vector(i / deg, &Poly::monomial(f, i % deg + 1)))
            .collect();
        Matrix::from_cols(f, &cols, self.module.dim)
    }
}

/// A module with a chain of invariant subspaces V_0 = M > V_1 > ... > V_k = 0.
pub struct FilteredModule {
    pub module: Module,
    /// chain[d] = basis of V_d
    pub chain: Vec<Vec<Vector>>,
    /// isomorphisms V_d/V_{d+1} -> V_0/V_1
    pub witnesses: Vec<Matrix>,
}

impl FilteredModule {
    pub fn layer(&self, d: usize) -> Result<Module> {
        self.module.restrict(&self.chain[d])?.quotient(&coords_in(&self.module.field, &self.chain[d], &self.chain[d + 1]))
    }
    pub fn chain_is_invariant(&self) -> bool {
        let f = &self.module.field;
        self.chain.iter().all(|b| {
            let s = Subspace::span(f, self.module.dim, b.clone());
            b.iter().all(|v| self.module.gens.iter().all(|g| s.contains(f, &g.mul_vec(f, v))))
        })
    }
}

/// Coordinates of the vectors `sub` in the basis `basis`.
pub fn coords_in(f: &Field, basis: &[Vector], sub: &[Vector]) -> Vec<Vector> {
    if basis.is_empty() {
        return vec![];
    }
    let b = Matrix::from_cols(f, basis, basis[0].len());
    sub.iter().map(|v| b.solve(f, v).expect("vector outside the span")).collect()
}

fn filtered_from_powers(col: &ColumnModule, alpha: &Scalar, k: usize, seed: u64) -> Result<FilteredModule> {
    let f = &col.module.field;
    let lin = Poly::linear(f, alpha);
    let chain: Vec<Vec<Vector>> = (0..=k).map(|d| if d == k { vec![] } else { col.multiples(&lin.pow(f, d)) }).collect();
    let mut fm = FilteredModule { module: col.module.clone(), chain, witnesses: vec![] };
    let top = fm.layer(0)?;
    for d in 0..k {
        let l = fm.layer(d)?;
        let w = find_isomorphism(&l, &top, seed)?.ok_or_else(|| Error::HypothesisFailed(format!("layer {d} is not isomorphic to the top")))?;
        fm.witnesses.push(w);
    }
    Ok(fm)
}

/// The module over D_n given by the column of [S, T, w] modulo (tau - alpha)^k.
/// Its simple top W(t, alpha) must be simple.
pub fn uniserial_module(field: &Field, n: usize, t: usize, alpha: &Scalar, fixed: usize, k: usize) -> Result<FilteredModule> {
    if k == 0 {
        return Err(Error::IndexOutOfRange("k must be positive".into()));
    }
    if t == 0 {
        return Err(Error::ZeroThroughStrings);
    }
    if field.is_zero(alpha) {
        return Err(Error::NotARoot("alpha must be invertible".into()));
    }
    let spec = AlgebraSpec::dn(field, n)?;
    let m = column_module(&spec, t, fixed, &Poly::linear(field, alpha))?;
    if !m.module.is_simple() {
        return Err(Error::NotSimple);
    }
    let col = column_module(&spec, t, fixed, &Poly::linear(field, alpha).pow(field, k))?;
    filtered_from_powers(&col, alpha, k, 1)
}

/// I_M(S): the self-extension of M = W(t, alpha) over D_n.
pub fn self_extension_module(field: &Field, n: usize, t: usize, alpha: &Scalar, fixed: usize) -> Result<FilteredModule> {
    uniserial_module(field, n, t, alpha, fixed, 2)
}

/// W(t, alpha) as a D_n-module.
pub fn dn_standard(field: &Field, n: usize, t: usize, alpha: &Scalar, fixed: usize) -> Result<Module> {
    let spec = AlgebraSpec::dn(field, n)?;
    Ok(column_module(&spec, t, fixed, &Poly::linear(field, alpha))?.module)
}

/// Certificate that the chain of a filtered module is its unique composition
/// series: every layer is isomorphic to the simple top M, and each quotient
/// M_total / V_d has a one-dimensional Hom from M (a simple socle).
pub fn uniserial_certificate(fm: &FilteredModule) -> Result<bool> {
    let f = &fm.module.field;
    let top = fm.layer(0)?;
    if !top.is_simple() {
        return Ok(false);
    }
    let k = fm.chain.len() - 1;
    for d in 1..k {
        let q = fm.module.quotient(&fm.chain[d])?;
        if hom_space(&top, &q)?.dim() != 1 {
            return Ok(false);
        }
    }
    let _ = f;
    Ok(hom_space(&top, &fm.module)?.dim() == 1)
}

/// All invariant subspaces of a small module spanned by socle chains,
/// enumerated as images of the nilpotent shift. Returns their dimensions when
/// they form a single chain.
pub fn invariant_chain_dims(col: &ColumnModule, alpha: &Scalar) -> Vec<usize> {
    let f = &col.module.field;
    let k = col.p.degree().unwrap();
    let lin = Poly::linear(f, alpha);
    (1..k).rev().map(|d| col.multiples(&lin.pow(f, d)).len()).collect()
}

/// Primary decomposition of U(T) = column of sector t of a finite algebra.
pub struct PrimaryDecomposition {
    pub u: ColumnModule,
    pub roots: RootData,
    /// per root: the filtered summand Q_i(T)
    pub summands: Vec<FilteredModule>,
    /// per root: basis of Q_i(T) inside U(T)
    pub bases: Vec<Vec<Vector>>,
}

pub fn primary_decomposition(alg: &Algebra, t: usize, fixed: usize) -> Result<PrimaryDecomposition> {
    let f = alg.field();
    let si = alg.layout.sector_index(t).ok_or_else(|| Error::WeightNotFound(format!("no sector t = {t}")))?;
    let sec = &alg.layout.sectors[si];
    if sec.identity_only {
        return Err(Error::HypothesisFailed("the top sector is one-dimensional".into()));
    }
    let u = column_module(&alg.spec, t, fixed, &sec.modulus)?;
    let rd = RootData { modulus: sec.modulus.clone(), roots: roots_of_poly(f, &sec.modulus)?, q: None };
    let mut summands = vec![];
    let mut bases = vec![];
    for i in 0..rd.m() {
        let g = g_basis(f, &rd, i)?;
        let s = g.len();
        // V_d = span{g^(c)(S) : c >= d}
        let level = |d: usize| -> Vec<Vector> {
            let mut v = vec![];
            for c in d..s {
                for h in 0..u.halves.len() {
                    v.push(u.vector(h, &g[c]));
                }
            }
            v
        };
        let basis = level(0);
        let chain: Vec<Vec<Vector>> = (0..=s).map(|d| coords_in(f, &basis, &level(d))).collect();
        let module = u.module.restrict(&basis)?;
        let mut fm = FilteredModule { module, chain, witnesses: vec![] };
        let top = fm.layer(0)?;
        for d in 0..s {
            let w = find_isomorphism(&fm.layer(d)?, &top, 5)?.ok_or_else(|| Error::HypothesisFailed(format!("Q_{i} layer {d} differs from the top")))?;
            fm.witnesses.push(w);
        }
        summands.push(fm);
        bases.push(basis);
    }
    Ok(PrimaryDecomposition { u, roots: rd, summands, bases })
}

/// A generalized eigenspace of u^n.
#[derive(Clone, Debug)]
pub struct Block {
    pub eigenvalue: Scalar,
    pub basis: Vec<Vector>,
    /// least k with (u^n - q)^k = 0 on the block
    pub nilpotency: usize,
}

/// Minimal polynomial of a square matrix, from Krylov sequences of unit vectors.
pub fn minimal_polynomial(f: &Field, a: &Matrix) -> Poly {
    let d = a.rows;
    let mut lcm = Poly::one(f);
    for i in 0..d {
        let mut vecs = vec![unit(f, d, i)];
        loop {
            let next = a.mul_vec(f, vecs.last().unwrap());
            let m = Matrix::from_cols(f, &vecs, d);
            if let Some(c) = m.solve(f, &next) {
                let mut coeffs: Vec<Scalar> = c.iter().map(|x| f.neg(x)).collect();
                coeffs.push(f.one());
                let p = Poly::new(f, coeffs);
                let g = lcm.gcd(f, &p);
                lcm = lcm.mul(f, &p).divrem(f, &g).unwrap().0;
                break;
            }
            vecs.push(next);
        }
    }
    lcm
}

pub fn block_decompose(m: &Module, n: usize) -> Result<Vec<Block>> {
    let f = &m.field;
    let a = m.u_to_n(n)?;
    let mp = minimal_polynomial(f, &a);
    let roots = roots_of_poly(f, &mp).map_err(|_| Error::EigenvaluesNotInField(mp.to_string_in(f, "X")))?;
    let mut out = vec![];
    for (r, mult) in roots {
        let shifted = a.sub(f, &Matrix::scalar(f, m.dim, &r));
        let basis = shifted.pow(f, mult).nullspace(f);
        out.push(Block { eigenvalue: r, basis, nilpotency: mult });
    }
    Ok(out)
}

/// The restriction of a standard module of J_q(n) to Gamma_n(q), with the
/// predicted Gamma label and an explicit isomorphism.
pub struct Restriction {
    pub label: Weight,
    pub root: Scalar,
    pub trivial: bool,
    pub intertwiner: Matrix,
}

pub fn restrict_to_tl(jones: &CellDatum, w: &StandardModule, gamma: &CellDatum) -> Result<Restriction> {
    let f = jones.field();
    let n = jones.alg.n();
    let names: Vec<String> = (1..=n).map(|i| format!("E{i}")).collect();
    let res = w.module.select(&names)?;
    let a = w.root.clone().ok_or_else(|| Error::RootsNotInField("unsplit layer".into()))?;
    let (root, trivial) = if w.t == n {
        (f.one(), true)
    } else if n % 2 == 1 {
        (f.mul(&a, &a), false)
    } else {
        (a, false)
    };
    let target = if trivial {
        let li = gamma.layers.iter().position(|l| l.weight.t == n).ok_or_else(|| Error::WeightNotFound("Gamma top".into()))?;
        standard_module_at(gamma, li, 0)?
    } else {
        standard_module_for_root(gamma, w.t, &root)?
    };
    let iso = find_isomorphism(&res, &target.module, 3)?.ok_or_else(|| Error::HypothesisFailed("restriction does not match the predicted label".into()))?;
    Ok(Restriction { label: target.weight, root, trivial, intertwiner: iso })
}

/// W(0, r) of D_n[J] for J = (f).
pub fn zero_sector_standard(field: &Field, n: usize, fpoly: &Poly, r: &Scalar) -> Result<StandardModule> {
    if n % 2 == 1 {
        return Err(Error::OddN);
    }
    if !field.is_zero(&fpoly.eval(field, r)) {
        return Err(Error::NotARoot(format!("{} is not a root of {}", field.fmt(r), fpoly.to_string_in(field, "X"))));
    }
    let spec = AlgebraSpec::dn_j(field, n, fpoly.clone())?;
    let alg = Arc::new(Algebra::new(&spec)?);
    let cd = CellDatum::build_lenient(alg)?;
    standard_module_for_root(&cd, 0, r)
}
