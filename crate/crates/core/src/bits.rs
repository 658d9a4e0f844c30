//! Linear algebra over GF(2) on machine words.
//!
//! Field elements of GF(2^D) with D <= 40 are `u64` bit-vectors, so every
//! GF(2)-linear map and every GF(2)-subspace of the ambient field can be
//! handled with shifts, XORs and small lookup tables.

/// A GF(2)-linear map from at most 64 input bits, evaluated bytewise.
#[derive(Clone, Debug)]
pub struct BitLinearMap {
    tables: Vec<[u64; 256]>,
}

impl BitLinearMap {
    /// Builds the map sending input bit `i` to `images[i]`.
    pub fn from_images(images: &[u64]) -> Self {
        assert!(images.len() <= 64);
        let tables = images
            .chunks(8)
            .map(|chunk| {
                let mut table = [0u64; 256];
                for byte in 1..256usize {
                    let low = byte.trailing_zeros() as usize;
                    let img = chunk.get(low).copied().unwrap_or(0);
                    table[byte] = table[byte & (byte - 1)] ^ img;
                }
                table
            })
            .collect();
        Self { tables }
    }

    #[inline]
    pub fn apply(&self, x: u64) -> u64 {
        let mut out = 0;
        for (i, table) in self.tables.iter().enumerate() {
            out ^= table[((x >> (8 * i)) & 0xff) as usize];
        }
        out
    }
}

/// Inserts `v` into a fully reduced echelon basis, keeping it fully reduced.
///
/// Rows are kept sorted by leading bit, highest first. Returns `false` if `v`
/// was already in the span.
pub fn insert_reduced(rows: &mut Vec<u64>, v: u64) -> bool {
    let v = reduce(rows, v);
    if v == 0 {
        return false;
    }
    let lead = 63 - v.leading_zeros();
    for r in rows.iter_mut() {
        if (*r >> lead) & 1 == 1 {
            *r ^= v;
        }
    }
    let pos = rows
        .iter()
        .position(|&r| r.leading_zeros() > v.leading_zeros())
        .unwrap_or(rows.len());
    rows.insert(pos, v);
    true
}

/// Reduces `v` modulo a fully reduced echelon basis.
#[inline]
pub fn reduce(rows: &[u64], mut v: u64) -> u64 {
    for &r in rows {
        let lead = 63 - r.leading_zeros();
        if (v >> lead) & 1 == 1 {
            v ^= r;
        }
    }
    v
}

/// Canonical fully reduced echelon basis of the span of `gens`.
pub fn echelon(gens: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let mut rows = Vec::new();
    for g in gens {
        insert_reduced(&mut rows, g);
    }
    rows
}

/// Rank of the span of `gens`.
pub fn rank(gens: impl IntoIterator<Item = u64>) -> usize {
    let mut rows: Vec<u64> = Vec::new();
    for g in gens {
        let mut v = g;
        for &r in &rows {
            v = v.min(v ^ r);
        }
        if v != 0 {
            rows.push(v);
            rows.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    rows.len()
}

/// Kernel of a linear map given on a spanning set of its domain.
///
/// `domain` spans the source space and `image` is evaluated on each spanning
/// vector; the result is a basis (not reduced) of the set of domain vectors
/// mapped to zero.
pub fn kernel(domain: &[u64], image: impl Fn(u64) -> u128) -> Vec<u64> {
    // Each row carries (image, preimage); combining rows keeps them consistent.
    let mut pivots: Vec<(u128, u64)> = Vec::new();
    let mut seen = Vec::new();
    let mut out = Vec::new();
    for &d in domain {
        if reduce(&seen, d) == 0 {
            continue;
        }
        insert_reduced(&mut seen, d);
        let mut row = (image(d), d);
        for &(img, pre) in &pivots {
            let lead = 127 - img.leading_zeros();
            if (row.0 >> lead) & 1 == 1 {
                row.0 ^= img;
                row.1 ^= pre;
            }
        }
        if row.0 == 0 {
            out.push(row.1);
        } else {
            pivots.push(row);
        }
    }
    out
}

/// Basis of the intersection of two GF(2)-subspaces of a `width`-bit space.
pub fn intersect(a: &[u64], b: &[u64], width: u32) -> Vec<u64> {
    debug_assert!(width <= 64);
    // Zassenhaus: rows (x | x) for x in a and (y | 0) for y in b.
    let mut rows: Vec<u128> = Vec::new();
    let gens = a
        .iter()
        .map(|&x| ((x as u128) << width) | x as u128)
        .chain(b.iter().map(|&y| (y as u128) << width));
    for mut v in gens {
        for &r in &rows {
            let lead = 127 - r.leading_zeros();
            if (v >> lead) & 1 == 1 {
                v ^= r;
            }
        }
        if v != 0 {
            rows.push(v);
            rows.sort_unstable_by(|x, y| y.cmp(x));
        }
    }
    let low = (1u128 << width) - 1;
    rows.into_iter()
        .filter(|r| r >> width == 0)
        .map(|r| (r & low) as u64)
        .collect()
}

/// Iterates over every vector of the GF(2)-span of a linearly independent set,
/// in Gray-code order starting from zero.
pub fn span_vectors(basis: &[u64]) -> impl Iterator<Item = u64> + '_ {
    let total: u64 = 1u64 << basis.len();
    let mut current = 0u64;
    (0..total).map(move |i| {
        if i > 0 {
            current ^= basis[i.trailing_zeros() as usize];
        }
        current
    })
}
