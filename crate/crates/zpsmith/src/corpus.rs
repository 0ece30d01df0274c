//! Deterministic builders for the named complexes: Σ_p, antipodal spheres,
//! skeleta of simplices, Melikhov's complexes, the two small Z_2 examples and
//! seeded random Z_p-complexes.
//!
//! Degree-2^h attachments are realized by Möbius towers: the mapping cylinder
//! of the double cover of a k-cycle, stacked h times and capped by a cone.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex::{ComplexError, SimplicialComplex, ZpComplex};

/// Σ_p: p points permuted cyclically.
pub fn sigma(p: u64) -> ZpComplex {
    let n = p as u32;
    let facets: Vec<Vec<u32>> = (0..n).map(|v| vec![v]).collect();
    let action = (0..n).map(|v| (v + 1) % n).collect();
    ZpComplex::new(
        SimplicialComplex::from_facets(n, &facets).expect("points"),
        p,
        action,
    )
    .expect("free action")
}

/// S^k as the (k+1)-fold join of S^0: vertices {2j, 2j+1}, t swaps each pair.
pub fn sphere(k: u32) -> ZpComplex {
    let n = 2 * (k + 1);
    let facets: Vec<Vec<u32>> = (0..1u32 << (k + 1))
        .map(|mask| (0..=k).map(|j| 2 * j + (mask >> j & 1)).collect())
        .collect();
    let action = (0..n).map(|v| v ^ 1).collect();
    ZpComplex::new(
        SimplicialComplex::from_facets(n, &facets).expect("cross polytope"),
        2,
        action,
    )
    .expect("antipodal action")
}

fn subsets(n: u32, size: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: u32, n: u32, size: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, size, cur, out);
            cur.pop();
        }
    }
    rec(0, n, size, &mut cur, &mut out);
    out
}

/// The n-skeleton of the simplex on 2n + 3 vertices.
pub fn skeleton(n: u32) -> SimplicialComplex {
    let v = 2 * n + 3;
    SimplicialComplex::from_facets(v, &subsets(v, n as usize + 1)).expect("skeleton")
}

/// Triangles of a capped Möbius tower of height `h` over the cycle `center`
/// (length >= 3). New vertices are numbered from `*next`. Level i has a
/// boundary cycle of length 2^i·k whose vertex m covers center vertex m mod
/// (previous length); the last boundary is coned off.
pub fn mobius_tower(center: &[u32], h: u32, next: &mut u32) -> Vec<Vec<u32>> {
    assert!(
        center.len() >= 3,
        "tower needs a cycle of length at least 3"
    );
    let mut tris = Vec::new();
    let mut c: Vec<u32> = center.to_vec();
    for _ in 0..h {
        let k = c.len();
        let b: Vec<u32> = (0..2 * k as u32).map(|i| *next + i).collect();
        *next += 2 * k as u32;
        for i in 0..2 * k {
            let (bi, bn) = (b[i], b[(i + 1) % (2 * k)]);
            let (ci, cn) = (c[i % k], c[(i + 1) % k]);
            tris.push(vec![bi, bn, cn]);
            tris.push(vec![bi, ci, cn]);
        }
        c = b;
    }
    let apex = *next;
    *next += 1;
    for i in 0..c.len() {
        tris.push(vec![c[i], c[(i + 1) % c.len()], apex]);
    }
    tris
}

/// Δ^(2)_6 with the triangle (0,1,2) replaced by an annulus onto an inner
/// triangle that is capped by a Möbius tower of height h, so the disk is
/// glued back by a map of degree 2^h. h = 0 gives back a triangulated disk.
pub fn melikhov(n: u32, h: u32) -> Result<SimplicialComplex, ComplexError> {
    if n != 2 {
        return Err(ComplexError::Chain(format!(
            "melikhov complexes are built for n = 2 only (got {n})"
        )));
    }
    let base = skeleton(2);
    let mut facets: Vec<Vec<u32>> = base
        .simplices(2)
        .iter()
        .filter(|s| **s != [0, 1, 2])
        .cloned()
        .collect();
    let outer = [0u32, 1, 2];
    let inner = [7u32, 8, 9];
    for i in 0..3 {
        let j = (i + 1) % 3;
        facets.push(vec![outer[i], outer[j], inner[j]]);
        facets.push(vec![outer[i], inner[i], inner[j]]);
    }
    let mut next = 10;
    facets.extend(mobius_tower(&inner, h, &mut next));
    SimplicialComplex::from_facets(next, &facets)
}

/// Hexagonal S^1 with t(i) = i + 3, plus a capped Möbius tower of height h
/// glued along the whole circle and its image under t.
pub fn example_a(h: u32) -> ZpComplex {
    let hex: Vec<u32> = (0..6).collect();
    let mut next = 6;
    let tower = mobius_tower(&hex, h, &mut next);
    let per_tower = next - 6;
    let n = 6 + 2 * per_tower;
    // t on the tower vertices: first copy v ↦ v + per_tower, and back
    let mut action: Vec<u32> = (0..6).map(|i| (i + 3) % 6).collect();
    action.extend((6..6 + per_tower).map(|v| v + per_tower));
    action.extend(6..6 + per_tower);
    let mut facets: Vec<Vec<u32>> = (0..6).map(|i| vec![i, (i + 1) % 6]).collect();
    facets.extend(tower);
    ZpComplex::from_orbit_facets(n, 2, action, &facets).expect("example a is a free Z_2-complex")
}

/// Icosahedron with the antipodal action: T = 0, upper pentagon U_k = 1 + k,
/// lower pentagon L_k = 6 + k, B = 11.
fn icosahedron() -> (Vec<[u32; 3]>, Vec<u32>) {
    let u = |k: u32| 1 + k % 5;
    let l = |k: u32| 6 + k % 5;
    let mut faces = Vec::new();
    for k in 0..5 {
        faces.push([0, u(k), u(k + 1)]);
        faces.push([11, l(k), l(k + 1)]);
        faces.push([u(k), u(k + 1), l(k)]);
        faces.push([l(k), l(k + 1), u(k + 1)]);
    }
    let mut t = vec![0u32; 12];
    t[0] = 11;
    t[11] = 0;
    for k in 0..5 {
        t[u(k) as usize] = l(k + 2);
        t[l(k) as usize] = u(k + 3);
    }
    (faces, t)
}

/// Antipodal 2-sphere with two removed triangles E11, E12 and their antipodes,
/// and two cylinders: one from ∂E11 to ∂E22 = t∂E12 and its image from ∂E21
/// to ∂E12. The sphere is the icosahedron with every face cut into four; the
/// removed triangles are the central subtriangles of (T,U0,U1) and (U2,U3,L2).
/// Each cylinder runs through a middle 3-cycle; `twist` reverses the matching
/// on the far end, which flips the relative degree of the two ends.
pub fn example_b_variant(twist: bool) -> ZpComplex {
    let (faces, t0) = icosahedron();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for f in &faces {
        for (a, b) in [(f[0], f[1]), (f[1], f[2]), (f[0], f[2])] {
            edges.push((a.min(b), a.max(b)));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let mid =
        |a: u32, b: u32| 12 + edges.binary_search(&(a.min(b), a.max(b))).expect("edge") as u32;
    let mut action = t0.clone();
    for &(a, b) in &edges {
        action.push(mid(t0[a as usize], t0[b as usize]));
    }
    let centre = |f: [u32; 3]| [mid(f[0], f[1]), mid(f[1], f[2]), mid(f[2], f[0])];
    let e11 = centre([0, 1, 2]);
    let e12 = centre([3, 4, 8]);
    let mut facets = Vec::new();
    for f in &faces {
        let c = centre(*f);
        facets.push(vec![f[0], c[0], c[2]]);
        facets.push(vec![f[1], c[1], c[0]]);
        facets.push(vec![f[2], c[2], c[1]]);
        let sorted = |mut x: [u32; 3]| {
            x.sort_unstable();
            x
        };
        let removed = [
            e11,
            e12,
            e11.map(|v| action[v as usize]),
            e12.map(|v| action[v as usize]),
        ];
        if !removed.iter().any(|r| sorted(*r) == sorted(c)) {
            facets.push(c.to_vec());
        }
    }
    // cylinder ∂E11 → middle → ∂E22, its image is added by the action
    let n0 = action.len() as u32;
    let m = [n0, n0 + 1, n0 + 2];
    let m_img = [n0 + 3, n0 + 4, n0 + 5];
    action.extend(m_img);
    action.extend(m);
    let e22 = e12.map(|v| action[v as usize]);
    let far = if twist { [e22[0], e22[2], e22[1]] } else { e22 };
    for (a, b) in [(e11, m), (m, far)] {
        for i in 0..3 {
            let j = (i + 1) % 3;
            facets.push(vec![a[i], a[j], b[i]]);
            facets.push(vec![a[j], b[i], b[j]]);
        }
    }
    ZpComplex::from_orbit_facets(action.len() as u32, 2, action, &facets)
        .expect("example b is a free Z_2-complex")
}

/// The fixed choice of [`example_b_variant`] used throughout.
pub fn example_b() -> ZpComplex {
    example_b_variant(EXAMPLE_B_TWIST)
}

pub const EXAMPLE_B_TWIST: bool = false;

/// Random Z_p-complex on p·m vertices with t(v) = v + m mod p·m: `facets`
/// random (dim+1)-sets closed under t, skipping sets that contain a whole
/// vertex orbit (those would hold a fixed face).
pub fn random_zp_complex(p: u64, m: u32, dim: u32, facets: usize, seed: u64) -> ZpComplex {
    let n = p as u32 * m;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let verts: Vec<u32> = (0..n).collect();
    let size = (dim as usize + 1).min(n as usize);
    let mut chosen: Vec<Vec<u32>> = (0..n).map(|v| vec![v]).collect();
    let mut tries = 0;
    while chosen.len() < n as usize + facets && tries < 100 * (facets + 1) {
        tries += 1;
        let mut f: Vec<u32> = verts.choose_multiple(&mut rng, size).copied().collect();
        f.sort_unstable();
        let full_orbit = f
            .iter()
            .any(|&v| (0..p as u32).all(|k| f.contains(&((v + k * m) % n))));
        if !full_orbit {
            chosen.push(f);
        }
    }
    let action = (0..n).map(|v| (v + m) % n).collect();
    ZpComplex::from_orbit_facets(n, p, action, &chosen)
        .expect("orbit-free facets give a free action")
}

/// Cycle c_0..c_{n-1} with t(c_i) = c_{i+n/p}, and p cone-capped disks
/// attached along it by degree-p maps, permuted by t. For p = 2 this has the
/// Smith data of `example_a(1)`. `n` must be a multiple of p and at least 3.
pub fn cyclic_moore(p: u64, n: u32) -> Result<ZpComplex, ComplexError> {
    if !crate::complex::is_prime(p) {
        return Err(ComplexError::NotPrime(p));
    }
    let q = p as u32;
    if n < 3 || !n.is_multiple_of(q) {
        return Err(ComplexError::Chain(format!(
            "cycle length {n} must be a multiple of {p} and at least 3"
        )));
    }
    let s = n / q;
    let outer = q * n;
    let per = outer + 1;
    let a = |r: u32, i: u32| n + r * per + (i % outer);
    let apex = |r: u32| n + r * per + outer;
    let mut facets = Vec::new();
    for r in 0..q {
        for i in 0..outer {
            // the outer circle wraps the cycle p times
            facets.push(vec![a(r, i), a(r, i + 1), (i + 1) % n]);
            facets.push(vec![a(r, i), i % n, (i + 1) % n]);
            facets.push(vec![a(r, i), a(r, i + 1), apex(r)]);
        }
    }
    let count = n + q * per;
    let mut action = vec![0u32; count as usize];
    for i in 0..n {
        action[i as usize] = (i + s) % n;
    }
    for r in 0..q {
        let shift = if r + 1 < q { s } else { s + outer - n };
        for i in 0..outer {
            action[a(r, i) as usize] = a((r + 1) % q, i + shift);
        }
        action[apex(r) as usize] = apex((r + 1) % q);
    }
    ZpComplex::new(SimplicialComplex::from_facets(count, &facets)?, p, action)
}

/// A corpus entry: either a Z_p-complex or a plain simplicial complex.
#[derive(Debug, Clone)]
pub enum CorpusItem {
    Zp(ZpComplex),
    Plain(SimplicialComplex),
}

pub const CORPUS_NAMES: [&str; 9] = [
    "sigma",
    "sphere",
    "skeleton",
    "melikhov",
    "example_a",
    "example_b",
    "cyclic_moore",
    "random",
    "edge",
];

/// Looks up a builder by name; missing parameters take the listed defaults:
/// sigma [p=2], sphere [k=1], skeleton [n=1], melikhov [n=2, h=1],
/// example_a [h=1], example_b [], cyclic_moore [p=3, n=3], random [p=2, m=4, dim=1, facets=6, seed=0], edge [].
pub fn by_name(name: &str, params: &[u64]) -> Result<CorpusItem, ComplexError> {
    let get = |i: usize, d: u64| params.get(i).copied().unwrap_or(d);
    let bad = |m: String| Err(ComplexError::Chain(m));
    Ok(match name {
        "sigma" => {
            let p = get(0, 2);
            if !crate::complex::is_prime(p) {
                return Err(ComplexError::NotPrime(p));
            }
            CorpusItem::Zp(sigma(p))
        }
        "sphere" => CorpusItem::Zp(sphere(get(0, 1) as u32)),
        "skeleton" => CorpusItem::Plain(skeleton(get(0, 1) as u32)),
        "melikhov" => CorpusItem::Plain(melikhov(get(0, 2) as u32, get(1, 1) as u32)?),
        "example_a" => CorpusItem::Zp(example_a(get(0, 1) as u32)),
        "example_b" => CorpusItem::Zp(example_b()),
        "cyclic_moore" => CorpusItem::Zp(cyclic_moore(get(0, 3), get(1, 3) as u32)?),
        "random" => {
            let p = get(0, 2);
            if !crate::complex::is_prime(p) {
                return Err(ComplexError::NotPrime(p));
            }
            CorpusItem::Zp(random_zp_complex(
                p,
                get(1, 4) as u32,
                get(2, 1) as u32,
                get(3, 6) as usize,
                get(4, 0),
            ))
        }
        "edge" => CorpusItem::Plain(SimplicialComplex::from_facets(2, &[vec![0, 1]])?),
        other => {
            return bad(format!(
                "unknown corpus entry {other:?}; known: {}",
                CORPUS_NAMES.join(", ")
            ))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_and_sphere_shapes() {
        assert_eq!(sigma(3).action, vec![1, 2, 0]);
        let s1 = sphere(1);
        assert_eq!(s1.complex.count(0), 4);
        assert_eq!(s1.complex.count(1), 4);
        assert_eq!(sphere(3).complex.vertex_count(), 8);
        assert_eq!(sphere(2).complex.count(2), 8);
    }

    #[test]
    fn skeleton_counts_are_binomials() {
        let s = skeleton(2);
        assert_eq!(
            (s.count(0), s.count(1), s.count(2), s.count(3)),
            (7, 21, 35, 0)
        );
        assert_eq!(skeleton(1).count(1), 10);
    }

    #[test]
    fn cyclic_moore_shape() {
        let z = cyclic_moore(3, 3).unwrap();
        assert_eq!(z.complex.count(0), 3 + 3 * 10);
        assert_eq!(z.complex.count(2), 3 * 27);
        assert!(cyclic_moore(3, 4).is_err());
        assert!(cyclic_moore(4, 4).is_err());
    }

    #[test]
    fn example_a_counts() {
        let a = example_a(1).complex;
        assert_eq!((a.count(0), a.count(1), a.count(2)), (32, 102, 72));
    }

    #[test]
    fn melikhov_counts_and_rejects_other_n() {
        let m = melikhov(2, 1).unwrap();
        assert_eq!((m.count(0), m.count(1), m.count(2)), (17, 54, 58));
        assert!(melikhov(3, 1).is_err());
        // h = 0 is Δ^(2)_6 with one triangle subdivided
        let m0 = melikhov(2, 0).unwrap();
        assert_eq!(m0.count(2), 35 - 1 + 6 + 3);
    }

    #[test]
    fn tower_edge_degrees() {
        let mut next = 3;
        let tris = mobius_tower(&[0, 1, 2], 2, &mut next);
        assert_eq!(next, 3 + 6 + 12 + 1);
        let c = SimplicialComplex::from_facets(next, &tris).unwrap();
        // the first boundary circle (vertices 3..8) carries one band below and the next band's
        // double cover above; every other edge lies in two triangles
        for e in c.simplices(1) {
            let deg = c
                .simplices(2)
                .iter()
                .filter(|t| e.iter().all(|v| t.contains(v)))
                .count();
            let intermediate =
                e.iter().all(|&v| (3..9).contains(&v)) && (e[1] - e[0] == 1 || e[1] - e[0] == 5);
            assert_eq!(deg, if intermediate { 3 } else { 2 }, "{e:?}");
        }
    }

    #[test]
    fn example_b_is_a_closed_surface() {
        for twist in [false, true] {
            let b = example_b_variant(twist).complex;
            let v = b.count(0) as i64;
            let e = b.count(1) as i64;
            let f = b.count(2) as i64;
            for edge in b.simplices(1) {
                let deg = b
                    .simplices(2)
                    .iter()
                    .filter(|t| edge.iter().all(|x| t.contains(x)))
                    .count();
                assert_eq!(deg, 2);
            }
            // sphere minus four disks plus two annuli: χ = 2 - 4 = -2
            assert_eq!(v - e + f, -2);
        }
    }

    #[test]
    fn builders_are_deterministic() {
        assert_eq!(
            random_zp_complex(3, 3, 2, 5, 9),
            random_zp_complex(3, 3, 2, 5, 9)
        );
        assert_eq!(example_b(), example_b());
    }

    #[test]
    fn random_complexes_validate() {
        for seed in 0..20 {
            for p in [2, 3, 5] {
                random_zp_complex(p, 3, 2, 4, seed).validate().unwrap();
            }
        }
    }

    #[test]
    fn unknown_names_are_rejected() {
        assert!(by_name("nope", &[]).is_err());
        assert!(matches!(
            by_name("sigma", &[4]),
            Err(ComplexError::NotPrime(4))
        ));
    }
}
