//! SCMA codebooks and symbol-to-codeword modulation.
//!
//! A codebook assigns every user `k` a set of `M` sparse complex codewords
//! of length `N`. Only the resources in the user's column of the mapping
//! matrix `S` carry energy. Users, resources and symbol indices are
//! 0-based in this API.
//!
//! # File format
//!
//! ```text
//! N=4 K=6 M=4
//! 0 1 1 0 1 0        <- S, one row per resource
//! ...
//! re,im re,im ...    <- M points for each (n, k) with s[n][k] = 1, row-major
//! ...
//! gray: 0 1 2 3      <- codebook index for labels 00, 01, 10, 11
//! sp: 0 3 1 2
//! ```
//!
//! `#` starts a comment. A file may instead list point lines for all
//! `N·K` pairs; the zero pattern is then checked against `S`.

use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};

const DEFAULT_CODEBOOK: &str = include_str!("../data/default_k6_n4_m4.cb");

/// Bijection between `L_M`-bit labels (first bit most significant) and
/// codebook indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labelling {
    label_to_index: Vec<usize>,
    index_to_label: Vec<usize>,
}

impl Labelling {
    pub fn new(label_to_index: Vec<usize>) -> Result<Self> {
        let m = label_to_index.len();
        if !m.is_power_of_two() || m < 2 {
            return Err(Error::invalid(format!("labelling of size {m}")));
        }
        let mut index_to_label = vec![usize::MAX; m];
        for (label, &idx) in label_to_index.iter().enumerate() {
            if idx >= m || index_to_label[idx] != usize::MAX {
                return Err(Error::invalid("labelling is not a permutation"));
            }
            index_to_label[idx] = label;
        }
        Ok(Labelling {
            label_to_index,
            index_to_label,
        })
    }

    pub fn identity(m: usize) -> Result<Self> {
        Labelling::new((0..m).collect())
    }

    pub fn m_points(&self) -> usize {
        self.label_to_index.len()
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.m_points().trailing_zeros() as usize
    }

    pub fn index_of_label(&self, label: usize) -> usize {
        self.label_to_index[label]
    }

    pub fn label_of_index(&self, index: usize) -> usize {
        self.index_to_label[index]
    }

    /// Label value for bits `(c_1, ..., c_{L_M})`, `c_1` most significant.
    pub fn pack(bits: &[u8]) -> usize {
        bits.iter().fold(0, |acc, &b| (acc << 1) | (b & 1) as usize)
    }

    /// Bit `level` (0-based, 0 = most significant) of `label`.
    #[inline]
    pub fn label_bit(&self, label: usize, level: usize) -> u8 {
        ((label >> (self.bits_per_symbol() - 1 - level)) & 1) as u8
    }

    pub fn index_of_bits(&self, bits: &[u8]) -> usize {
        self.index_of_label(Self::pack(bits))
    }

    pub fn bits_of_index(&self, index: usize) -> Vec<u8> {
        let label = self.label_of_index(index);
        (0..self.bits_per_symbol())
            .map(|l| self.label_bit(label, l))
            .collect()
    }
}

/// One user's transmitted symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UserSymbol {
    pub user: usize,
    pub index: usize,
}

impl UserSymbol {
    pub fn from_bits(user: usize, bits: &[u8], labelling: &Labelling) -> Self {
        UserSymbol {
            user,
            index: labelling.index_of_bits(bits),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScmaCodebook {
    n_resources: usize,
    n_users: usize,
    m_points: usize,
    mapping: Vec<Vec<bool>>,
    /// `points[(n * K + k) * M + c]`
    points: Vec<Complex64>,
    resources_of_user: Vec<Vec<usize>>,
    users_of_resource: Vec<Vec<usize>>,
    gray: Labelling,
    sp: Labelling,
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn parse_complex(tok: &str) -> Option<Complex64> {
    let (re, im) = tok.split_once(',')?;
    Some(Complex64::new(re.trim().parse().ok()?, im.trim().parse().ok()?))
}

impl ScmaCodebook {
    /// The bundled K=6, N=4, M=4 codebook.
    pub fn default_k6_n4_m4() -> Self {
        ScmaCodebook::parse(DEFAULT_CODEBOOK, "<bundled codebook>")
            .expect("bundled codebook is valid")
    }

    pub fn bundled_text() -> &'static str {
        DEFAULT_CODEBOOK
    }

    pub fn parse(text: &str, source_name: &str) -> Result<Self> {
        let fmt = |line: usize, msg: String| Error::format(source_name, line, msg);
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, strip_comment(l)))
            .filter(|(_, l)| !l.is_empty());

        let (hline, header) = lines
            .next()
            .ok_or_else(|| fmt(0, "empty codebook".into()))?;
        let (mut n_res, mut n_users, mut m_points) = (None, None, None);
        for tok in header.split_whitespace() {
            let (key, value) = tok
                .split_once('=')
                .ok_or_else(|| fmt(hline, format!("bad header token `{tok}`")))?;
            let value: usize = value
                .parse()
                .map_err(|_| fmt(hline, format!("bad header value `{tok}`")))?;
            match key {
                "N" => n_res = Some(value),
                "K" => n_users = Some(value),
                "M" => m_points = Some(value),
                _ => return Err(fmt(hline, format!("unknown header key `{key}`"))),
            }
        }
        let (n_res, n_users, m_points) = match (n_res, n_users, m_points) {
            (Some(n), Some(k), Some(m)) => (n, k, m),
            _ => return Err(fmt(hline, "header needs N=, K= and M=".into())),
        };
        if n_res == 0 || n_users == 0 {
            return Err(fmt(hline, "N and K must be positive".into()));
        }
        if !m_points.is_power_of_two() || m_points < 2 {
            return Err(Error::invalid(format!(
                "codebook size M={m_points} is not a power of two"
            )));
        }

        let mut mapping = Vec::with_capacity(n_res);
        for _ in 0..n_res {
            let (no, line) = lines
                .next()
                .ok_or_else(|| fmt(0, "mapping matrix truncated".into()))?;
            let row: Vec<bool> = line
                .split_whitespace()
                .map(|t| match t {
                    "0" => Ok(false),
                    "1" => Ok(true),
                    _ => Err(fmt(no, format!("mapping entry `{t}` is not 0/1"))),
                })
                .collect::<Result<_>>()?;
            if row.len() != n_users {
                return Err(fmt(no, format!("mapping row has {} entries", row.len())));
            }
            mapping.push(row);
        }

        let mut point_lines = Vec::new();
        let mut gray = None;
        let mut sp = None;
        for (no, line) in lines {
            if let Some(rest) = line.strip_prefix("gray:") {
                gray = Some((no, rest.to_owned()));
            } else if let Some(rest) = line.strip_prefix("sp:") {
                sp = Some((no, rest.to_owned()));
            } else {
                let pts: Vec<Complex64> = line
                    .split_whitespace()
                    .map(|t| parse_complex(t).ok_or_else(|| fmt(no, format!("bad point `{t}`"))))
                    .collect::<Result<_>>()?;
                if pts.len() != m_points {
                    return Err(fmt(no, format!("expected {m_points} points, got {}", pts.len())));
                }
                point_lines.push((no, pts));
            }
        }

        let nnz: usize = mapping.iter().flatten().filter(|&&s| s).count();
        let mut points = vec![Complex64::new(0.0, 0.0); n_res * n_users * m_points];
        if point_lines.len() == nnz {
            let mut it = point_lines.into_iter();
            for (n, row) in mapping.iter().enumerate() {
                for (k, &s) in row.iter().enumerate() {
                    if s {
                        let (no, pts) = it.next().expect("counted");
                        if pts.iter().all(|p| p.norm_sqr() == 0.0) {
                            return Err(fmt(no, format!("resource {n} of user {k} is all zero")));
                        }
                        let base = (n * n_users + k) * m_points;
                        points[base..base + m_points].copy_from_slice(&pts);
                    }
                }
            }
        } else if point_lines.len() == n_res * n_users {
            for (i, (no, pts)) in point_lines.into_iter().enumerate() {
                let (n, k) = (i / n_users, i % n_users);
                let nonzero = pts.iter().any(|p| p.norm_sqr() != 0.0);
                if nonzero != mapping[n][k] {
                    return Err(fmt(
                        no,
                        format!(
                            "zero pattern of resource {n}, user {k} contradicts mapping matrix"
                        ),
                    ));
                }
                let base = (n * n_users + k) * m_points;
                points[base..base + m_points].copy_from_slice(&pts);
            }
        } else {
            return Err(fmt(
                0,
                format!(
                    "{} point lines; expected {nnz} (sparse) or {} (dense)",
                    point_lines.len(),
                    n_res * n_users
                ),
            ));
        }

        let label = |entry: Option<(usize, String)>, name: &str| -> Result<Labelling> {
            let (no, rest) = entry.ok_or_else(|| fmt(0, format!("missing `{name}:` line")))?;
            let perm: Vec<usize> = rest
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| fmt(no, format!("bad index `{t}`"))))
                .collect::<Result<_>>()?;
            if perm.len() != m_points {
                return Err(fmt(no, format!("{name} labelling needs {m_points} entries")));
            }
            Labelling::new(perm).map_err(|e| fmt(no, e.to_string()))
        };
        let gray = label(gray, "gray")?;
        let sp = label(sp, "sp")?;

        let resources_of_user: Vec<Vec<usize>> = (0..n_users)
            .map(|k| (0..n_res).filter(|&n| mapping[n][k]).collect())
            .collect();
        let users_of_resource: Vec<Vec<usize>> = (0..n_res)
            .map(|n| (0..n_users).filter(|&k| mapping[n][k]).collect())
            .collect();
        let dv = resources_of_user[0].len();
        let df = users_of_resource[0].len();
        if dv == 0 || resources_of_user.iter().any(|d| d.len() != dv) {
            return Err(fmt(0, "mapping matrix columns have unequal weight".into()));
        }
        if users_of_resource.iter().any(|c| c.len() != df) {
            return Err(fmt(0, "mapping matrix rows have unequal weight".into()));
        }

        let mut cb = ScmaCodebook {
            n_resources: n_res,
            n_users,
            m_points,
            mapping,
            points,
            resources_of_user,
            users_of_resource,
            gray,
            sp,
        };
        cb.normalize();
        Ok(cb)
    }

    fn normalize(&mut self) {
        for k in 0..self.n_users {
            let es = self.user_energy(k);
            let scale = 1.0 / es.sqrt();
            for n in 0..self.n_resources {
                let base = (n * self.n_users + k) * self.m_points;
                for p in &mut self.points[base..base + self.m_points] {
                    *p *= scale;
                }
            }
        }
    }

    /// Average codeword energy `(1/M) Σ_c Σ_n |V_{n,k}(c)|²` of user `k`.
    pub fn user_energy(&self, k: usize) -> f64 {
        let total: f64 = (0..self.n_resources)
            .flat_map(|n| (0..self.m_points).map(move |c| (n, c)))
            .map(|(n, c)| self.point(n, k, c).norm_sqr())
            .sum();
        total / self.m_points as f64
    }

    pub fn n_resources(&self) -> usize {
        self.n_resources
    }

    pub fn n_users(&self) -> usize {
        self.n_users
    }

    pub fn m_points(&self) -> usize {
        self.m_points
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.m_points.trailing_zeros() as usize
    }

    pub fn mapping(&self, n: usize, k: usize) -> bool {
        self.mapping[n][k]
    }

    /// `D_k`: resources occupied by user `k`.
    pub fn resources_of_user(&self, k: usize) -> &[usize] {
        &self.resources_of_user[k]
    }

    /// `C_n`: users sharing resource `n`.
    pub fn users_of_resource(&self, n: usize) -> &[usize] {
        &self.users_of_resource[n]
    }

    /// `V_{n,k}(c)`.
    #[inline]
    pub fn point(&self, n: usize, k: usize, c: usize) -> Complex64 {
        self.points[(n * self.n_users + k) * self.m_points + c]
    }

    pub fn gray(&self) -> &Labelling {
        &self.gray
    }

    pub fn sp(&self) -> &Labelling {
        &self.sp
    }

    /// Squared Euclidean distance between two codewords of user `k`.
    pub fn codeword_distance_sq(&self, k: usize, a: usize, b: usize) -> f64 {
        (0..self.n_resources)
            .map(|n| (self.point(n, k, a) - self.point(n, k, b)).norm_sqr())
            .sum()
    }
}

pub fn load_codebook(path: impl AsRef<Path>) -> Result<ScmaCodebook> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    ScmaCodebook::parse(&text, &path.display().to_string())
}

/// Sparse codeword `x_k` for `symbol`: `x_{n,k} = V_{n,k}(c)`.
pub fn scma_modulate(symbol: UserSymbol, cb: &ScmaCodebook) -> Vec<Complex64> {
    (0..cb.n_resources())
        .map(|n| cb.point(n, symbol.user, symbol.index))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scaled_text(factor: f64) -> String {
        let mut out = String::new();
        for line in ScmaCodebook::bundled_text().lines() {
            let body = strip_comment(line);
            if body.contains(',') {
                let scaled: Vec<String> = body
                    .split_whitespace()
                    .map(|t| {
                        let p = parse_complex(t).unwrap() * factor;
                        format!("{},{}", p.re, p.im)
                    })
                    .collect();
                out.push_str(&scaled.join(" "));
            } else {
                out.push_str(line);
            }
            out.push('\n');
        }
        out
    }

    #[test]
    fn bundled_codebook_is_regular() {
        let cb = ScmaCodebook::default_k6_n4_m4();
        assert_eq!((cb.n_resources(), cb.n_users(), cb.m_points()), (4, 6, 4));
        for k in 0..6 {
            assert_eq!(cb.resources_of_user(k).len(), 2);
        }
        for n in 0..4 {
            assert_eq!(cb.users_of_resource(n).len(), 3);
        }
    }

    #[test]
    fn supports_follow_mapping_matrix() {
        let cb = ScmaCodebook::default_k6_n4_m4();
        // first two columns of S are (0,1,0,1) and (1,0,1,0)
        assert_eq!(cb.resources_of_user(0), &[1, 3]);
        assert_eq!(cb.resources_of_user(1), &[0, 2]);
        for k in 0..6 {
            for c in 0..4 {
                let x = scma_modulate(UserSymbol { user: k, index: c }, &cb);
                for n in 0..4 {
                    assert_eq!(x[n].norm_sqr() != 0.0, cb.mapping(n, k));
                }
            }
        }
    }

    #[test]
    fn energy_normalized_and_scale_invariant() {
        let cb = ScmaCodebook::default_k6_n4_m4();
        for k in 0..6 {
            assert!((cb.user_energy(k) - 1.0).abs() < 1e-12);
        }
        let scaled = ScmaCodebook::parse(&scaled_text(7.0), "scaled").unwrap();
        for n in 0..4 {
            for k in 0..6 {
                for c in 0..4 {
                    assert!((scaled.point(n, k, c) - cb.point(n, k, c)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn modulation_is_injective() {
        let cb = ScmaCodebook::default_k6_n4_m4();
        for k in 0..6 {
            for a in 0..4 {
                for b in (a + 1)..4 {
                    assert!(cb.codeword_distance_sq(k, a, b) > 0.1);
                }
            }
        }
    }

    #[test]
    fn bundled_labellings_fit_geometry() {
        let cb = ScmaCodebook::default_k6_n4_m4();
        for k in 0..6 {
            // Gray: the two farthest pairs (equal up to table rounding) differ in both bits.
            let far = (0..4)
                .flat_map(|a| ((a + 1)..4).map(move |b| (a, b)))
                .map(|(a, b)| cb.codeword_distance_sq(k, a, b))
                .fold(0.0, f64::max);
            for a in 0..4 {
                for b in (a + 1)..4 {
                    let hamming = (cb.gray().label_of_index(a) ^ cb.gray().label_of_index(b))
                        .count_ones();
                    let d = cb.codeword_distance_sq(k, a, b);
                    assert_eq!(hamming == 2, (d - far).abs() < 1e-3 * far, "user {k} pair {a},{b}");
                }
            }
            // SP: fixing the first bit leaves the farthest pair.
            for b1 in 0..2 {
                let a = cb.sp().index_of_label(b1 << 1);
                let b = cb.sp().index_of_label((b1 << 1) | 1);
                assert!((cb.codeword_distance_sq(k, a, b) - far).abs() < 1e-3 * far);
            }
        }
    }

    #[test]
    fn nonzero_entry_outside_mapping_rejected() {
        let dense = "N=2 K=2 M=2\n1 0\n0 1\n1,0 -1,0\n0.5,0 0,0\n0,0 0,0\n0,1 0,-1\ngray: 0 1\nsp: 0 1\n";
        let err = ScmaCodebook::parse(dense, "dense").unwrap_err();
        assert!(matches!(err, Error::Format { .. }), "{err}");

        let ok = dense.replace("0.5,0 0,0", "0,0 0,0");
        assert!(ScmaCodebook::parse(&ok, "dense").is_ok());
    }

    #[test]
    fn non_power_of_two_size_rejected() {
        let text = "N=1 K=1 M=3\n1\n1,0 0,1 -1,0\ngray: 0 1 2\nsp: 0 1 2\n";
        assert!(matches!(
            ScmaCodebook::parse(text, "m3"),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn label_bits_are_msb_first() {
        let lab = Labelling::new(vec![0, 3, 1, 2]).unwrap();
        assert_eq!(lab.index_of_bits(&[0, 1]), 3);
        assert_eq!(lab.bits_of_index(1), vec![1, 0]);
        assert_eq!(lab.label_bit(0b10, 0), 1);
        assert_eq!(lab.label_bit(0b10, 1), 0);
    }
}
