//! Sobol' low-discrepancy sequence with Joe–Kuo direction numbers.
//!
//! Points are produced in Gray-code order, so the first `2^m` points of any
//! block starting at a multiple of `2^m` form a digital net.

const BITS: usize = 32;

/// `(degree, polynomial interior coefficients, initial direction numbers)`
/// for dimensions 2 onwards (new-joe-kuo-6.21201).
const DIRECTIONS: &[(u32, u32, &[u32])] = &[
    (1, 0, &[1]),
    (2, 1, &[1, 3]),
    (3, 1, &[1, 3, 1]),
    (3, 2, &[1, 1, 1]),
    (4, 1, &[1, 1, 3, 3]),
    (4, 4, &[1, 3, 5, 13]),
    (5, 2, &[1, 1, 5, 5, 17]),
    (5, 4, &[1, 1, 5, 5, 5]),
    (5, 7, &[1, 1, 7, 11, 19]),
    (5, 11, &[1, 1, 5, 1, 1]),
    (5, 13, &[1, 1, 1, 3, 11]),
    (5, 14, &[1, 3, 5, 5, 31]),
    (6, 1, &[1, 3, 3, 9, 7, 49]),
    (6, 13, &[1, 1, 1, 15, 21, 21]),
    (6, 16, &[1, 3, 1, 13, 27, 49]),
    (6, 19, &[1, 1, 1, 15, 7, 5]),
    (6, 22, &[1, 3, 1, 15, 13, 25]),
    (6, 25, &[1, 1, 5, 5, 19, 61]),
    (7, 1, &[1, 3, 7, 11, 23, 15, 103]),
    (7, 4, &[1, 3, 7, 13, 13, 15, 69]),
];

/// Largest supported dimension.
pub const MAX_DIMENSION: usize = DIRECTIONS.len() + 1;

#[derive(Debug, Clone)]
pub struct Sobol {
    directions: Vec<[u32; BITS]>,
}

impl Sobol {
    /// Returns `None` when `dimension` exceeds [`MAX_DIMENSION`].
    pub fn new(dimension: usize) -> Option<Self> {
        if dimension > MAX_DIMENSION {
            return None;
        }
        let mut directions = Vec::with_capacity(dimension);
        for d in 0..dimension {
            let mut v = [0u32; BITS];
            if d == 0 {
                for (k, vk) in v.iter_mut().enumerate() {
                    *vk = 1 << (BITS - 1 - k);
                }
            } else {
                let (s, a, m) = DIRECTIONS[d - 1];
                let s = s as usize;
                for k in 0..s {
                    v[k] = m[k] << (BITS - 1 - k);
                }
                for k in s..BITS {
                    let mut x = v[k - s] ^ (v[k - s] >> s);
                    for j in 1..s {
                        if (a >> (s - 1 - j)) & 1 == 1 {
                            x ^= v[k - j];
                        }
                    }
                    v[k] = x;
                }
            }
            directions.push(v);
        }
        Some(Sobol { directions })
    }

    pub fn dimension(&self) -> usize {
        self.directions.len()
    }

    /// Writes point `index` (Gray-code order) into `out`.
    pub fn point(&self, index: u64, out: &mut [f64]) {
        let gray = index ^ (index >> 1);
        const SCALE: f64 = 1.0 / (1u64 << BITS) as f64;
        for (o, v) in out.iter_mut().zip(&self.directions) {
            let mut x = 0u32;
            let mut g = gray;
            let mut k = 0;
            while g != 0 && k < BITS {
                if g & 1 == 1 {
                    x ^= v[k];
                }
                g >>= 1;
                k += 1;
            }
            *o = x as f64 * SCALE;
        }
    }

    /// Integer coordinates of point `index` in dimension `d`, for tests.
    #[cfg(test)]
    fn raw(&self, index: u64, d: usize) -> u32 {
        let gray = index ^ (index >> 1);
        (0..BITS)
            .filter(|k| (gray >> k) & 1 == 1)
            .fold(0, |x, k| x ^ self.directions[d][k])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Multiplicative order of `x` modulo the GF(2) polynomial `p` of degree `s`.
    fn order_of_x(p: u32, s: u32) -> u32 {
        let mut r: u32 = 1;
        for k in 1..=(1u32 << s) {
            r <<= 1;
            if r & (1 << s) != 0 {
                r ^= p;
            }
            if r == 1 {
                return k;
            }
        }
        0
    }

    #[test]
    fn polynomials_are_primitive_and_distinct() {
        let mut seen = std::collections::HashSet::new();
        for &(s, a, m) in DIRECTIONS {
            let p = (1 << s) | (a << 1) | 1;
            assert_eq!(order_of_x(p, s), (1 << s) - 1, "poly {p:b} not primitive");
            assert!(seen.insert(p));
            assert_eq!(m.len(), s as usize);
            for (k, &mk) in m.iter().enumerate() {
                assert_eq!(mk % 2, 1);
                assert!(mk < 1 << (k + 1));
            }
        }
    }

    #[test]
    fn first_points_match_reference() {
        let s = Sobol::new(3).unwrap();
        let mut p = [0.0; 3];
        let expect = [
            [0.0, 0.0, 0.0],
            [0.5, 0.5, 0.5],
            [0.75, 0.25, 0.25],
            [0.25, 0.75, 0.75],
            [0.375, 0.375, 0.625],
            [0.875, 0.875, 0.125],
        ];
        for (i, e) in expect.iter().enumerate() {
            s.point(i as u64, &mut p);
            assert_eq!(&p, e, "point {i}");
        }
    }

    #[test]
    fn matches_published_table_in_all_dimensions() {
        // values from an independent Joe-Kuo implementation
        let s = Sobol::new(MAX_DIMENSION).unwrap();
        let mut p = [0.0; MAX_DIMENSION];
        s.point(777, &mut p);
        let expect_777 = [
            0.6923828125, 0.9365234375, 0.1630859375, 0.2744140625, 0.6357421875,
            0.3564453125, 0.1904296875, 0.7626953125, 0.3486328125, 0.3232421875,
            0.7451171875, 0.6962890625, 0.3837890625, 0.4736328125, 0.5693359375,
            0.5146484375, 0.4033203125, 0.8642578125, 0.3701171875, 0.7529296875,
            0.2373046875,
        ];
        assert_eq!(p, expect_777);
        s.point(1023, &mut p);
        let expect_1023 = [
            0.0009765625, 0.7529296875, 0.6123046875, 0.1455078125, 0.1865234375,
            0.4384765625, 0.1396484375, 0.6181640625, 0.3447265625, 0.8505859375,
            0.6787109375, 0.0361328125, 0.1298828125, 0.6650390625, 0.3623046875,
            0.4638671875, 0.3134765625, 0.8759765625, 0.5849609375, 0.3193359375,
            0.8662109375,
        ];
        assert_eq!(p, expect_1023);
    }

    #[test]
    fn every_dyadic_block_is_a_permutation_per_coordinate() {
        // each one-dimensional projection of 2^m consecutive aligned points
        // hits every interval [j/2^m, (j+1)/2^m) exactly once
        let s = Sobol::new(MAX_DIMENSION).unwrap();
        let m = 8;
        for start in [0u64, 256, 1 << 18] {
            for d in 0..MAX_DIMENSION {
                let mut hit = vec![false; 1 << m];
                for i in start..start + (1 << m) {
                    let cell = (s.raw(i, d) >> (BITS - m)) as usize;
                    assert!(!hit[cell], "dim {d} start {start}");
                    hit[cell] = true;
                }
            }
        }
    }

    #[test]
    fn two_dimensional_projections_are_well_stratified() {
        // 2^10 points on a 2^5 x 2^5 grid: no cell holds more than 16
        let s = Sobol::new(MAX_DIMENSION).unwrap();
        for d1 in 0..MAX_DIMENSION {
            for d2 in (d1 + 1)..MAX_DIMENSION {
                let mut cells = vec![0u32; 1 << 10];
                for i in 0..1u64 << 10 {
                    let c1 = (s.raw(i, d1) >> (BITS - 5)) as usize;
                    let c2 = (s.raw(i, d2) >> (BITS - 5)) as usize;
                    cells[(c1 << 5) | c2] += 1;
                }
                let max = *cells.iter().max().unwrap();
                assert!(max <= 16, "dims ({d1}, {d2}) max cell count {max}");
            }
        }
    }

    #[test]
    fn rejects_too_many_dimensions() {
        assert!(Sobol::new(MAX_DIMENSION + 1).is_none());
    }
}
