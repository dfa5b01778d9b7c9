//! Biquadratic fields `Q(√m, √n)`, their integral bases and exact
//! structure constants.
//!
//! Elements of the field are handled in the rational basis
//! `(1, √m, √n, √k)` of the role-assigned triple, with the root convention
//! `√m·√n = d·√k` where `d = gcd(|m|, |n|)`.  Consequently
//! `√m·√k = (m/d)·√n` and `√n·√k = (n/d)·√m`.

use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

type Rational = Ratio<i128>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not square-free")]
    NotSquareFree(i64),
    #[error("degenerate field: m = {m}, n = {n} does not generate a quartic field")]
    DegenerateField { m: i64, n: i64 },
    #[error("no integral-basis pattern matches ({m}, {n}, {k}) ({matched} patterns matched)")]
    NoPatternMatch {
        m: i64,
        n: i64,
        k: i64,
        matched: usize,
    },
    #[error("basis product {i}*{j} has non-integral coordinate {value}")]
    NonIntegralStructure { i: usize, j: usize, value: String },
}

/// The four shapes of integral basis, named after the residues mod 4 of
/// the role-assigned `(m, n, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pattern {
    /// `m ≡ 3`, `n ≡ k ≡ 2 (mod 4)`; basis `1, √m, √n, (√n+√k)/2`.
    M3N2K2,
    /// `m ≡ 1`, `n ≡ k ≡ 3 (mod 4)`; basis `1, (1+√m)/2, √n, (√n+√k)/2`.
    M1N3K3,
    /// `m ≡ 1`, `n ≡ k ≡ 2 (mod 4)`; basis `1, (1+√m)/2, √n, (√n+√k)/2`.
    M1N2K2,
    /// `m ≡ n ≡ k ≡ 1 (mod 4)`; basis `1, (1+√m)/2, (1+√n)/2, (1+√m)(1+√k)/4`.
    M1N1K1,
}

impl Pattern {
    pub const ALL: [Pattern; 4] = [
        Pattern::M3N2K2,
        Pattern::M1N3K3,
        Pattern::M1N2K2,
        Pattern::M1N1K1,
    ];

    fn residues(self) -> [i64; 3] {
        match self {
            Pattern::M3N2K2 => [3, 2, 2],
            Pattern::M1N3K3 => [1, 3, 3],
            Pattern::M1N2K2 => [1, 2, 2],
            Pattern::M1N1K1 => [1, 1, 1],
        }
    }

    fn matches(self, roles: &Roles) -> bool {
        let [rm, rn, rk] = self.residues();
        roles.m.rem_euclid(4) == rm && roles.n.rem_euclid(4) == rn && roles.k.rem_euclid(4) == rk
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Pattern::M3N2K2 => "M3_N2_K2",
            Pattern::M1N3K3 => "M1_N3_K3",
            Pattern::M1N2K2 => "M1_N2_K2",
            Pattern::M1N1K1 => "M1_N1_K1",
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which of the three square roots fills each slot of the pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Roles {
    pub m: i64,
    pub n: i64,
    pub k: i64,
}

impl Roles {
    /// `gcd(|m|, |n|)` of the role pair.
    pub fn d(&self) -> i64 {
        gcd(self.m.abs(), self.n.abs())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiquadraticField {
    pub m: i64,
    pub n: i64,
    pub d: i64,
    pub k: i64,
    pub pattern: Pattern,
    pub roles: Roles,
}

impl BiquadraticField {
    /// The sorted triple `{m, n, k}`; two generator pairs give the same
    /// field iff their keys agree.
    pub fn key(&self) -> [i64; 3] {
        let mut t = [self.m, self.n, self.k];
        t.sort_unstable();
        t
    }

    /// The integer `c` with `√x·√y = c·√z`, where `{x, y, z} = {m, n, k}`.
    /// Roots are fixed by `√m·√n = d·√k` for the generating pair, so
    /// `√m·√k = (m/d)·√n` and `√n·√k = (n/d)·√m`.
    pub fn root_product(&self, x: i64, y: i64) -> i64 {
        let pair = |a: i64, b: i64| (x == a && y == b) || (x == b && y == a);
        if pair(self.m, self.n) {
            self.d
        } else if pair(self.m, self.k) {
            self.m / self.d
        } else if pair(self.n, self.k) {
            self.n / self.d
        } else {
            panic!("{x}, {y} are not two of the radicands of {self}")
        }
    }
}

impl fmt::Display for BiquadraticField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(√{}, √{})", self.m, self.n)
    }
}

pub fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.abs()
}

/// Trial division; `0` is not square-free, `±1` are.
pub fn is_square_free(x: i64) -> bool {
    if x == 0 {
        return false;
    }
    let mut v = x.unsigned_abs();
    let mut p = 2u64;
    while p * p <= v {
        if v.is_multiple_of(p) {
            v /= p;
            if v.is_multiple_of(p) {
                return false;
            }
        }
        p += 1;
    }
    true
}

// Index permutations of (m, n, k) in lexicographic order.
const ROLE_PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

pub fn make_field(m: i64, n: i64) -> Result<BiquadraticField, FieldError> {
    if m == n || matches!(m, 0 | 1) || matches!(n, 0 | 1) {
        return Err(FieldError::DegenerateField { m, n });
    }
    for x in [m, n] {
        if !is_square_free(x) {
            return Err(FieldError::NotSquareFree(x));
        }
    }
    let d = gcd(m.abs(), n.abs());
    let k = (m / d) * (n / d);
    if !is_square_free(k) {
        return Err(FieldError::NotSquareFree(k));
    }
    if k == 1 {
        return Err(FieldError::DegenerateField { m, n });
    }

    let triple = [m, n, k];
    let mut roles = None;
    let mut matched: Vec<Pattern> = Vec::new();
    for perm in ROLE_PERMS {
        let candidate = Roles {
            m: triple[perm[0]],
            n: triple[perm[1]],
            k: triple[perm[2]],
        };
        for pattern in Pattern::ALL {
            if pattern.matches(&candidate) {
                if roles.is_none() {
                    roles = Some((pattern, candidate));
                }
                if !matched.contains(&pattern) {
                    matched.push(pattern);
                }
            }
        }
    }
    match (roles, matched.len()) {
        (Some((pattern, roles)), 1) => Ok(BiquadraticField {
            m,
            n,
            d,
            k,
            pattern,
            roles,
        }),
        (_, count) => Err(FieldError::NoPatternMatch {
            m,
            n,
            k,
            matched: count,
        }),
    }
}

/// Exact multiplication table of a rank-4 order: `basis_i · basis_j =
/// Σ_h table[i][j][h] · basis_h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Structure(pub [[[i64; 4]; 4]; 4]);

impl Structure {
    pub fn get(&self, i: usize, j: usize) -> [i64; 4] {
        self.0[i][j]
    }

    /// Exact product of integer coordinate vectors.
    pub fn mul(&self, x: &[i128; 4], y: &[i128; 4]) -> [i128; 4] {
        let mut out = [0i128; 4];
        for i in 0..4 {
            for j in 0..4 {
                let c = x[i] * y[j];
                if c == 0 {
                    continue;
                }
                for (h, o) in out.iter_mut().enumerate() {
                    *o += c * self.0[i][j][h] as i128;
                }
            }
        }
        out
    }

    pub fn pow(&self, x: &[i128; 4], e: u32) -> [i128; 4] {
        let mut acc = [1, 0, 0, 0];
        for _ in 0..e {
            acc = self.mul(&acc, x);
        }
        acc
    }

    pub fn is_unital(&self) -> bool {
        (0..4).all(|j| {
            let mut unit = [0i64; 4];
            unit[j] = 1;
            self.0[0][j] == unit && self.0[j][0] == unit
        })
    }

    pub fn is_commutative(&self) -> bool {
        (0..4).all(|i| (0..4).all(|j| self.0[i][j] == self.0[j][i]))
    }

    /// Checks `(b_i b_j) b_l = b_i (b_j b_l)` on all 64 basis triples.
    pub fn is_associative(&self) -> bool {
        let unit = |i: usize| {
            let mut v = [0i128; 4];
            v[i] = 1;
            v
        };
        (0..4).all(|i| {
            (0..4).all(|j| {
                (0..4).all(|l| {
                    let left = self.mul(&self.mul(&unit(i), &unit(j)), &unit(l));
                    let right = self.mul(&unit(i), &self.mul(&unit(j), &unit(l)));
                    left == right
                })
            })
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralBasis {
    pub description: [String; 4],
    pub structure: Structure,
    /// Rows are the basis elements in rational coordinates over
    /// `(1, √m, √n, √k)`; `None` for orders not given by radicals.
    radical_coords: Option<[[Rational; 4]; 4]>,
}

impl IntegralBasis {
    /// The order `Z[α]`, `α⁴ + c₃α³ + c₂α² + c₁α + c₀ = 0`, with basis
    /// `1, α, α², α³`. `coeffs` is `[c₀, c₁, c₂, c₃]`.
    ///
    /// Only the 2-adic completion matters downstream, so `Z[α]` needs to be
    /// maximal at 2 (e.g. Eisenstein at 2) rather than globally maximal.
    pub fn monogenic(coeffs: [i64; 4]) -> IntegralBasis {
        // powers α^0..α^6 reduced to the basis
        let mut powers = vec![[1i64, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];
        for _ in 4..=6 {
            let prev = *powers.last().expect("nonempty");
            // α·prev = shift, then replace α⁴ by -(c₀ + c₁α + c₂α² + c₃α³)
            let top = prev[3];
            let next = [
                -top * coeffs[0],
                prev[0] - top * coeffs[1],
                prev[1] - top * coeffs[2],
                prev[2] - top * coeffs[3],
            ];
            powers.push(next);
        }
        let mut table = [[[0i64; 4]; 4]; 4];
        for (i, row) in table.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = powers[i + j];
            }
        }
        IntegralBasis {
            description: ["1", "α", "α²", "α³"].map(String::from),
            structure: Structure(table),
            radical_coords: None,
        }
    }

    /// Rational coordinates `(1, √m, √n, √k)` of basis element `i`, when
    /// the basis was built from radicals.
    pub fn radical_row(&self, i: usize) -> Option<[Rational; 4]> {
        self.radical_coords.map(|rows| rows[i])
    }

    /// Integer coordinates of a field element given over `(1, √m, √n, √k)`,
    /// or `None` if it is not in the order.
    pub fn coordinates_of(&self, q: &[Rational; 4]) -> Option<[i64; 4]> {
        let rows = self.radical_coords.as_ref()?;
        let c = solve_lower_triangular(rows, q);
        let mut out = [0i64; 4];
        for (o, v) in out.iter_mut().zip(c.iter()) {
            if !v.is_integer() {
                return None;
            }
            *o = i64::try_from(v.to_integer()).ok()?;
        }
        Some(out)
    }

    /// `det(Tr(b_i b_j))` for radical bases (trace of `q₀ + q₁√m + …` is
    /// `4 q₀`).
    pub fn discriminant(&self) -> Option<i128> {
        let rows = self.radical_coords.as_ref()?;
        let traces: Vec<Rational> = rows.iter().map(|r| r[0] * Rational::from(4)).collect();
        let mut gram = [[Rational::from(0); 4]; 4];
        for (i, grow) in gram.iter_mut().enumerate() {
            for (j, g) in grow.iter_mut().enumerate() {
                let s = self.structure.get(i, j);
                *g = (0..4).fold(Rational::from(0), |acc, h| {
                    acc + traces[h] * Rational::from(s[h] as i128)
                });
            }
        }
        let det = determinant(gram);
        det.is_integer().then(|| det.to_integer())
    }
}

fn solve_lower_triangular(rows: &[[Rational; 4]; 4], p: &[Rational; 4]) -> [Rational; 4] {
    // rows[i][j] == 0 for j > i; solve c · rows = p from the last column back
    let mut c = [Rational::from(0); 4];
    for j in (0..4).rev() {
        let mut rest = p[j];
        for i in (j + 1)..4 {
            rest -= c[i] * rows[i][j];
        }
        c[j] = rest / rows[j][j];
    }
    c
}

fn determinant(mut a: [[Rational; 4]; 4]) -> Rational {
    let mut det = Rational::from(1);
    for col in 0..4 {
        let Some(pivot) = (col..4).find(|&r| a[r][col] != Rational::from(0)) else {
            return Rational::from(0);
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for r in (col + 1)..4 {
            let factor = a[r][col] / a[col][col];
            for c in col..4 {
                let v = a[col][c];
                a[r][c] -= factor * v;
            }
        }
    }
    det
}

fn radical_product(
    field: &BiquadraticField,
    x: &[Rational; 4],
    y: &[Rational; 4],
) -> [Rational; 4] {
    let Roles { m, n, k } = field.roles;
    let (mn, mk, nk) = (
        field.root_product(m, n),
        field.root_product(m, k),
        field.root_product(n, k),
    );
    // products of (1, √m, √n, √k) in role slots: value and target slot
    let table: [[(i64, usize); 4]; 4] = [
        [(1, 0), (1, 1), (1, 2), (1, 3)],
        [(1, 1), (m, 0), (mn, 3), (mk, 2)],
        [(1, 2), (mn, 3), (n, 0), (nk, 1)],
        [(1, 3), (mk, 2), (nk, 1), (k, 0)],
    ];
    let mut out = [Rational::from(0); 4];
    for i in 0..4 {
        for j in 0..4 {
            let (scale, slot) = table[i][j];
            out[slot] += x[i] * y[j] * Rational::from(scale as i128);
        }
    }
    out
}

fn basis_rows(field: &BiquadraticField) -> [[Rational; 4]; 4] {
    let z = Rational::from(0);
    let one = Rational::from(1);
    let half = Rational::new(1, 2);
    let quarter = Rational::new(1, 4);
    let rows_m = [one, z, z, z];
    match field.pattern {
        Pattern::M3N2K2 => [rows_m, [z, one, z, z], [z, z, one, z], [z, z, half, half]],
        Pattern::M1N3K3 | Pattern::M1N2K2 => [
            rows_m,
            [half, half, z, z],
            [z, z, one, z],
            [z, z, half, half],
        ],
        Pattern::M1N1K1 => {
            // (1 + √m)(1 + √k)/4 = (1 + √m + √k + √m√k)/4
            let md = Rational::from(field.root_product(field.roles.m, field.roles.k) as i128);
            [
                rows_m,
                [half, half, z, z],
                [half, z, half, z],
                [quarter, quarter, md * quarter, quarter],
            ]
        }
    }
}

fn basis_description(pattern: Pattern) -> [String; 4] {
    let d: [&str; 4] = match pattern {
        Pattern::M3N2K2 => ["1", "√m", "√n", "(√n+√k)/2"],
        Pattern::M1N3K3 | Pattern::M1N2K2 => ["1", "(1+√m)/2", "√n", "(√n+√k)/2"],
        Pattern::M1N1K1 => ["1", "(1+√m)/2", "(1+√n)/2", "(1+√m)(1+√k)/4"],
    };
    d.map(String::from)
}

pub fn integral_basis(field: &BiquadraticField) -> Result<IntegralBasis, FieldError> {
    let rows = basis_rows(field);
    let mut table = [[[0i64; 4]; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let prod = radical_product(field, &rows[i], &rows[j]);
            let coords = solve_lower_triangular(&rows, &prod);
            for h in 0..4 {
                let v = coords[h];
                if !v.is_integer() {
                    return Err(FieldError::NonIntegralStructure {
                        i,
                        j,
                        value: v.to_string(),
                    });
                }
                table[i][j][h] = v.to_integer() as i64;
            }
        }
    }
    Ok(IntegralBasis {
        description: basis_description(field.pattern),
        structure: Structure(table),
        radical_coords: Some(rows),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minus_two_minus_six_roles() {
        let f = make_field(-2, -6).unwrap();
        assert_eq!((f.d, f.k), (2, 3));
        assert_eq!(f.pattern, Pattern::M3N2K2);
        assert_eq!(f.roles, Roles { m: 3, n: -2, k: -6 });
    }

    #[test]
    fn all_one_mod_eight() {
        let f = make_field(17, 33).unwrap();
        assert_eq!((f.d, f.k), (1, 561));
        assert_eq!(f.pattern, Pattern::M1N1K1);
        // 561 = 3·11·17
        assert!(is_square_free(561));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(make_field(4, 3), Err(FieldError::NotSquareFree(4)));
        assert_eq!(make_field(3, 12), Err(FieldError::NotSquareFree(12)));
        assert!(matches!(
            make_field(3, 3),
            Err(FieldError::DegenerateField { .. })
        ));
        assert!(matches!(
            make_field(0, 3),
            Err(FieldError::DegenerateField { .. })
        ));
        assert!(matches!(
            make_field(1, 3),
            Err(FieldError::DegenerateField { .. })
        ));
    }

    #[test]
    fn negative_radicands() {
        let f = make_field(-1, 2).unwrap();
        assert_eq!(f.k, -2);
        let f = make_field(-3, 3).unwrap();
        assert_eq!((f.d, f.k), (3, -1));
    }

    #[test]
    fn c_squared_m3_n2_k2() {
        let f = make_field(-2, -6).unwrap();
        let b = integral_basis(&f).unwrap();
        // c² = (n+k)/4 + (√n√k/2) with √(-2)·√(-6) = 2√3: -2 + a
        assert_eq!(b.structure.get(3, 3), [-2, 1, 0, 0]);
    }

    #[test]
    fn identity_row() {
        for (m, n) in [(-2, -6), (17, 33), (5, 3), (17, 2)] {
            let b = integral_basis(&make_field(m, n).unwrap()).unwrap();
            assert!(b.structure.is_unital());
        }
    }

    #[test]
    fn bc_product_m1_n1_k1() {
        // bc = (m−1)/4·(n+d)/2d + ((n/d)−d)/4·a + (1−m)/4·b + (d+1)/2·c
        let f = make_field(17, 33).unwrap();
        let r = f.roles;
        let d = r.d();
        let b = integral_basis(&f).unwrap();
        let expected = [
            (r.m - 1) / 4 * (r.n + d) / (2 * d),
            (r.n / d - d) / 4,
            (1 - r.m) / 4,
            (d + 1) / 2,
        ];
        assert_eq!(b.structure.get(2, 3), expected);
    }

    #[test]
    fn monogenic_eisenstein() {
        // α⁴ = 2
        let b = IntegralBasis::monogenic([-2, 0, 0, 0]);
        assert!(b.structure.is_unital());
        assert!(b.structure.is_commutative());
        assert!(b.structure.is_associative());
        assert_eq!(b.structure.get(3, 1), [2, 0, 0, 0]);
        assert_eq!(b.structure.get(3, 3), [0, 0, 2, 0]);
    }

    #[test]
    fn square_free_by_trial_division() {
        let sf: Vec<i64> = (1..=30).filter(|&x| is_square_free(x)).collect();
        assert_eq!(
            sf,
            vec![1, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23, 26, 29, 30]
        );
        assert!(is_square_free(-1));
        assert!(!is_square_free(-18));
    }
}
