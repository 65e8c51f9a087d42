//! Linear difference equations `sigma^d(Y) = A Y` over the tower.

use num_integer::Integer;

use super::{Found, SolveError, Witness};
use crate::ffield::fplin;
use crate::ffield::kn::{base_embed_matrix, kn_sigma_matrix};
use crate::ffield::{FieldError, FieldTower, FiniteField, KnMatrix, LevelField, Matrix, PrimeField, TowerElem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinDiffEq {
    pub a: Matrix,
    pub d: usize,
}

impl LinDiffEq {
    pub fn new(tower: &FieldTower, a: Matrix, d: usize) -> Result<Self, SolveError> {
        if a.rows == 0 || !a.is_square() {
            return Err(SolveError::Invalid("the coefficient matrix must be square".into()));
        }
        if d == 0 {
            return Err(SolveError::Invalid("the power d must be at least 1".into()));
        }
        let lf = tower.level(a.level)?;
        if lf.is_zero(&a.determinant(&lf)) {
            return Err(SolveError::NotInvertible);
        }
        Ok(LinDiffEq { a, d })
    }

    pub fn size(&self) -> usize {
        self.a.rows
    }
}

fn lift(tower: &FieldTower, m: &Matrix, t: usize) -> Result<Matrix, SolveError> {
    if m.level == t {
        Ok(m.clone())
    } else {
        Ok(m.embed(tower, t)?)
    }
}

/// `sigma^{(count-1)d}(A) ... sigma^d(A) A`, the identity for `count = 0`.
pub fn twisted_product(tower: &FieldTower, a: &Matrix, d: usize, count: usize) -> Matrix {
    let lf = tower.level(a.level).expect("matrix level is within the cap");
    let mut acc = Matrix::identity(&lf, a.rows);
    for u in 0..count {
        acc = a.frobenius(tower, (u * d) as i64).mul(&lf, &acc);
    }
    acc
}

fn mat_pow(lf: &LevelField, m: &Matrix, mut k: usize) -> Matrix {
    let mut acc = Matrix::identity(lf, m.rows);
    let mut base = m.clone();
    while k > 0 {
        if k & 1 == 1 {
            acc = acc.mul(lf, &base);
        }
        base = base.mul(lf, &base);
        k >>= 1;
    }
    acc
}

/// The equation `sigma^{dl}(Y) = sigma^{(l-1)d}(A) ... sigma^d(A) A Y`.
pub fn fold_linear(tower: &FieldTower, eq: &LinDiffEq, l: usize) -> LinDiffEq {
    assert!(l >= 1, "folding needs l >= 1");
    LinDiffEq { a: twisted_product(tower, &eq.a, eq.d, l), d: eq.d * l }
}

/// Checks `sigma^d(Y) = A Y` in `GL_m(k^[n])`, `A` acting through the diagonal embedding.
pub fn verify_kn_solution(tower: &FieldTower, eq: &LinDiffEq, y: &KnMatrix) -> Result<bool, SolveError> {
    let n = y.components.len();
    let level = y.components[0].level;
    let t = level.lcm(&eq.a.level);
    let lf = tower.level(t)?;
    let y = KnMatrix {
        components: y.components.iter().map(|c| lift(tower, c, t)).collect::<Result<_, _>>()?,
    };
    let mut lhs = y.clone();
    for _ in 0..eq.d {
        lhs = kn_sigma_matrix(tower, &lhs, 1);
    }
    let a = base_embed_matrix(tower, &lift(tower, &eq.a, t)?, n, 1);
    Ok(lhs
        .components
        .iter()
        .zip(a.components.iter().zip(&y.components))
        .all(|(l, (ai, yi))| *l == ai.mul(&lf, yi)))
}

/// Turns a solution `Z` over `k` of the `l`-fold equation into a solution over `k^[dl]` of
/// the original one: reading from the right, position `ud + v` holds
/// `sigma^v(sigma^{(u-1)d}(A) ... A Z)`.
pub fn unfold_linear_solution(
    tower: &FieldTower,
    z: &Matrix,
    eq: &LinDiffEq,
    l: usize,
) -> Result<KnMatrix, SolveError> {
    if l == 0 || z.rows != eq.size() || !z.is_square() {
        return Err(SolveError::Invalid("Z must be square of the size of A and l >= 1".into()));
    }
    let d = eq.d;
    let n = d * l;
    let t = z.level.lcm(&eq.a.level);
    let lf = tower.level(t)?;
    let a = lift(tower, &eq.a, t)?;
    let z = lift(tower, z, t)?;
    let folded = twisted_product(tower, &a, d, l);
    if z.frobenius(tower, n as i64) != folded.mul(&lf, &z) {
        return Err(SolveError::NotASolution);
    }
    let mut components = vec![z.clone(); n];
    let mut nu = Matrix::identity(&lf, a.rows);
    for u in 0..l {
        if u > 0 {
            nu = a.frobenius(tower, ((u - 1) * d) as i64).mul(&lf, &nu);
        }
        let base = nu.mul(&lf, &z);
        for v in 0..d {
            components[n - 1 - (u * d + v)] = base.frobenius(tower, v as i64);
        }
    }
    let out = KnMatrix { components };
    if !verify_kn_solution(tower, eq, &out)? {
        return Err(SolveError::Verification("unfolded matrix does not solve the equation".into()));
    }
    Ok(out)
}

/// `a * x` in the power basis of `lf`.
fn mul_x(lf: &LevelField, f: &PrimeField, a: &TowerElem) -> TowerElem {
    let deg = a.coeffs.len();
    let top = a.coeffs[deg - 1];
    let mut c = vec![0u64; deg];
    c[1..].copy_from_slice(&a.coeffs[..deg - 1]);
    if top != 0 {
        for (ci, mi) in c.iter_mut().zip(lf.modulus()) {
            *ci = f.sub(ci, &f.mul(&top, mi));
        }
    }
    TowerElem { level: a.level, coeffs: c }
}

/// An `F_p`-basis of `{y in level(t)^m : sigma^d(y) = A y}`, from the kernel of the
/// `F_p`-linear map `y -> sigma^d(y) - A y` on coordinates.
pub fn lang_kernel(
    tower: &FieldTower,
    a: &Matrix,
    d: usize,
    t: usize,
) -> Result<Vec<Vec<TowerElem>>, SolveError> {
    let lf = tower.level(t)?;
    let f = PrimeField::new(tower.p());
    let a = lift(tower, a, t)?;
    let m = a.rows;
    let deg = lf.degree();
    let dim = m * deg;
    // images of the power basis under sigma^d
    let fx = tower.frobenius(&lf.gen_x(), d as i64);
    let mut fpow = Vec::with_capacity(deg);
    let mut cur = lf.one();
    for _ in 0..deg {
        fpow.push(cur.clone());
        cur = lf.mul(&cur, &fx);
    }
    let mut mat = vec![vec![0u64; dim]; dim];
    for j in 0..m {
        for (k, fp) in fpow.iter().enumerate() {
            let col = j * deg + k;
            for (c, v) in fp.coeffs.iter().enumerate() {
                mat[j * deg + c][col] = *v;
            }
        }
        for i in 0..m {
            let mut q = a.get(i, j).clone();
            for k in 0..deg {
                let col = j * deg + k;
                for (c, v) in q.coeffs.iter().enumerate() {
                    let cell = &mut mat[i * deg + c][col];
                    *cell = f.sub(cell, v);
                }
                if k + 1 < deg {
                    q = mul_x(&lf, &f, &q);
                }
            }
        }
    }
    let kernel = fplin::kernel(&f, &mat, dim);
    Ok(kernel
        .into_iter()
        .map(|v| {
            (0..m)
                .map(|i| TowerElem { level: t, coeffs: v[i * deg..(i + 1) * deg].to_vec() })
                .collect()
        })
        .collect())
}

/// Greedily keeps vectors that are independent over the level field.
fn independent_columns(lf: &LevelField, vectors: impl IntoIterator<Item = Vec<TowerElem>>, m: usize) -> Vec<Vec<TowerElem>> {
    let mut chosen: Vec<Vec<TowerElem>> = Vec::new();
    for v in vectors {
        if chosen.len() == m {
            break;
        }
        let mut cols = chosen.clone();
        cols.push(v.clone());
        let rows: Vec<Vec<TowerElem>> =
            (0..v.len()).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        if Matrix::from_rows(lf.level(), rows).rank(lf) == cols.len() {
            chosen.push(v);
        }
    }
    chosen
}

fn columns_to_matrix(level: usize, cols: &[Vec<TowerElem>]) -> Matrix {
    let m = cols[0].len();
    Matrix::from_rows(level, (0..m).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect())
}

/// Solves `sigma^d(Y) = A Y` with `Y` invertible over a finite level (Lang's theorem, so
/// `n = 1`). Levels `t, 2t, ...` are skipped until the twisted norm of `A` over the level is
/// the identity; the solution space is then computed once.
pub fn lang_solve(tower: &FieldTower, eq: &LinDiffEq) -> Result<Found, SolveError> {
    let t = eq.a.level;
    let d = eq.d;
    let m = eq.size();
    let lt = tower.level(t)?;
    let rt = t / t.gcd(&d);
    let b = twisted_product(tower, &eq.a, d, rt);
    let cap = tower.caps().max_level;
    let mut level = t;
    loop {
        if level > cap {
            return Err(FieldError::CapExceeded { requested: level, cap }.into());
        }
        let r = level / level.gcd(&d);
        if mat_pow(&lt, &b, r / rt).is_identity(&lt) {
            break;
        }
        level += t;
    }
    let lf = tower.level(level)?;
    let kernel = lang_kernel(tower, &eq.a, d, level)?;
    let cols = independent_columns(&lf, kernel, m);
    if cols.len() < m {
        return Err(SolveError::Verification(format!(
            "only {} independent solutions at level {level}",
            cols.len()
        )));
    }
    let y = columns_to_matrix(level, &cols);
    let a = lift(tower, &eq.a, level)?;
    if y.frobenius(tower, d as i64) != a.mul(&lf, &y) {
        return Err(SolveError::Verification("Lang solution does not satisfy the equation".into()));
    }
    Ok(Found { n: 1, level, witness: Witness::Matrix(y) })
}

/// The `md x md` step-one matrix with identity blocks on the block superdiagonal and `A` in
/// the lower-left block.
pub fn block_companion(tower: &FieldTower, eq: &LinDiffEq) -> Result<LinDiffEq, SolveError> {
    let m = eq.size();
    let d = eq.d;
    let lf = tower.level(eq.a.level)?;
    let mut b = Matrix::zeros(&lf, m * d, m * d);
    for blk in 0..d - 1 {
        for i in 0..m {
            b.set(blk * m + i, (blk + 1) * m + i, lf.one());
        }
    }
    for i in 0..m {
        for j in 0..m {
            b.set((d - 1) * m + i, j, eq.a.get(i, j).clone());
        }
    }
    Ok(LinDiffEq { a: b, d: 1 })
}

/// From an invertible `Z` with `sigma^{l_d}(Z) = B-hat Z` for the block companion `B`,
/// picks the lexicographically first `m` columns whose first `m` coordinates are
/// independent; the projections solve `sigma^{l_d}(Y) = A-hat Y`, `A-hat` the
/// `(l_d / d)`-fold product of `A`.
pub fn extract_block_solution(
    tower: &FieldTower,
    eq: &LinDiffEq,
    z: &Matrix,
    l_d: usize,
) -> Result<Matrix, SolveError> {
    let m = eq.size();
    let d = eq.d;
    if l_d == 0 || l_d % d != 0 {
        return Err(SolveError::Invalid(format!("{l_d} is not a positive multiple of d = {d}")));
    }
    if z.rows != m * d || !z.is_square() {
        return Err(SolveError::Invalid("Z must have the size of the block companion".into()));
    }
    let t = z.level.lcm(&eq.a.level);
    let lf = tower.level(t)?;
    let z = lift(tower, z, t)?;
    let projections = (0..z.cols).map(|j| (0..m).map(|i| z.get(i, j).clone()).collect());
    let cols = independent_columns(&lf, projections, m);
    if cols.len() < m {
        return Err(SolveError::NoIndependentColumns(m));
    }
    let y = columns_to_matrix(t, &cols);
    let folded = lift(tower, &fold_linear(tower, eq, l_d / d).a, t)?;
    if y.frobenius(tower, l_d as i64) != folded.mul(&lf, &y) {
        return Err(SolveError::NotASolution);
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(tw: &FieldTower, t: usize, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            t,
            rows.iter().map(|r| r.iter().map(|&x| tw.from_int(x, t).unwrap()).collect()).collect(),
        )
    }

    fn witness(f: &Found) -> &Matrix {
        match &f.witness {
            Witness::Matrix(m) => m,
            _ => panic!("expected a matrix"),
        }
    }

    #[test]
    fn fold_examples() {
        let tw = FieldTower::new(5, 1).unwrap();
        let eq = LinDiffEq::new(&tw, mat(&tw, 1, &[&[2]]), 1).unwrap();
        assert_eq!(fold_linear(&tw, &eq, 1), eq);
        let f = fold_linear(&tw, &eq, 2);
        assert_eq!((f.a, f.d), (mat(&tw, 1, &[&[4]]), 2));
    }

    #[test]
    fn lang_identity_and_scalar() {
        let tw = FieldTower::new(5, 1).unwrap();
        let eq = LinDiffEq::new(&tw, mat(&tw, 1, &[&[1, 0], &[0, 1]]), 1).unwrap();
        let f = lang_solve(&tw, &eq).unwrap();
        assert_eq!((f.n, f.level), (1, 1));
        assert_eq!(witness(&f), &eq.a);

        let eq = LinDiffEq::new(&tw, mat(&tw, 1, &[&[2]]), 1).unwrap();
        let f = lang_solve(&tw, &eq).unwrap();
        assert_eq!(f.level, 4);
        let y = witness(&f).get(0, 0).clone();
        let lf = tw.level(4).unwrap();
        let two = tw.from_int(2, 4).unwrap();
        assert_eq!(lf.pow_u64(&y, 5), lf.mul(&two, &y));
    }

    #[test]
    fn unfold_small_cases() {
        let tw = FieldTower::new(5, 1).unwrap();
        let lf = tw.level(1).unwrap();
        let eq = LinDiffEq::new(&tw, Matrix::identity(&lf, 2), 1).unwrap();
        let z = Matrix::identity(&lf, 2);
        let u = unfold_linear_solution(&tw, &z, &eq, 2).unwrap();
        assert_eq!(u.components, vec![z.clone(), z.clone()]);
        let u = unfold_linear_solution(&tw, &z, &eq, 1).unwrap();
        assert_eq!(u.components, vec![z]);

        let eq = LinDiffEq::new(&tw, mat(&tw, 1, &[&[2]]), 1).unwrap();
        let folded = fold_linear(&tw, &eq, 2);
        let z = witness(&lang_solve(&tw, &folded).unwrap()).clone();
        let u = unfold_linear_solution(&tw, &z, &eq, 2).unwrap();
        let lz = tw.level(z.level).unwrap();
        let az = mat(&tw, 1, &[&[2]]).embed(&tw, z.level).unwrap().mul(&lz, &z);
        assert_eq!(u.components, vec![az, z.clone()]);
        assert_eq!(
            unfold_linear_solution(&tw, &mat(&tw, 1, &[&[3]]), &eq, 2),
            Err(SolveError::NotASolution)
        );
    }

    #[test]
    fn block_companion_pipeline() {
        let tw = FieldTower::new(5, 1).unwrap();
        let eq = LinDiffEq::new(&tw, mat(&tw, 1, &[&[2]]), 2).unwrap();
        let b = block_companion(&tw, &eq).unwrap();
        assert_eq!(b.a, mat(&tw, 1, &[&[0, 1], &[2, 0]]));
        let lf = tw.level(1).unwrap();
        assert_eq!(b.a.frobenius(&tw, 1).mul(&lf, &b.a), mat(&tw, 1, &[&[2, 0], &[0, 2]]));
        let z = witness(&lang_solve(&tw, &b).unwrap()).clone();
        let y = extract_block_solution(&tw, &eq, &z, 2).unwrap();
        let ly = tw.level(y.level).unwrap();
        let v = y.get(0, 0);
        assert_eq!(ly.pow_u64(v, 25), ly.mul(&tw.from_int(2, y.level).unwrap(), v));
    }
}
