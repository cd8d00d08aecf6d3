//! Slow, obviously-correct reference computations for the test suites.
//!
//! Nothing here depends on `qcap-core`; inputs are plain numbers and vectors so
//! an oracle cannot silently share a bug with the code it checks.

use std::collections::BTreeMap;

/// One circuit layer as `(pairs, singles)`.
pub type LayerSpec = (Vec<(usize, usize)>, Vec<usize>);

/// Exact success probability of one mirror circuit under independent X flips,
/// by enumerating every fault pattern. `layers[k]` is `(pairs, singles)`;
/// flips land on singles with `eps_1q`, on each qubit of a pair with
/// `1 - sqrt(1 - eps_2q)`, then each pair copies control onto target. Meant
/// for at most ~20 fault locations.
pub fn exact_mirror_success(
    width: usize,
    layers: &[LayerSpec],
    eps_1q: f64,
    eps_2q: f64,
    eps_meas: f64,
    include_measurement: bool,
) -> f64 {
    assert!(width <= 64);
    let q_pair = 1.0 - (1.0 - eps_2q).sqrt();
    // (layer, qubit, probability); layer == usize::MAX marks readout
    let mut events: Vec<(usize, usize, f64)> = Vec::new();
    for (k, (pairs, singles)) in layers.iter().enumerate() {
        for &q in singles {
            events.push((k, q, eps_1q));
        }
        for &(c, t) in pairs {
            events.push((k, c, q_pair));
            events.push((k, t, q_pair));
        }
    }
    if include_measurement {
        for q in 0..width {
            events.push((usize::MAX, q, eps_meas));
        }
    }
    assert!(events.len() <= 24, "too many fault locations to enumerate");

    let mut total = 0.0;
    for mask in 0u64..(1u64 << events.len()) {
        let mut weight = 1.0;
        for (i, e) in events.iter().enumerate() {
            weight *= if mask >> i & 1 == 1 { e.2 } else { 1.0 - e.2 };
        }
        if weight == 0.0 {
            continue;
        }
        let mut frame = 0u64;
        for (k, (pairs, _)) in layers.iter().enumerate() {
            for (i, e) in events.iter().enumerate() {
                if e.0 == k && mask >> i & 1 == 1 {
                    frame ^= 1 << e.1;
                }
            }
            for &(c, t) in pairs {
                if frame >> c & 1 == 1 {
                    frame ^= 1 << t;
                }
            }
        }
        for (i, e) in events.iter().enumerate() {
            if e.0 == usize::MAX && mask >> i & 1 == 1 {
                frame ^= 1 << e.1;
            }
        }
        if frame == 0 {
            total += weight;
        }
    }
    total
}

/// Success probability as a direct product of per-slot survival factors.
pub fn product_success(
    width: u64,
    depth: u64,
    paired: u64,
    eps_1q: f64,
    eps_2q: f64,
    eps_meas: f64,
) -> f64 {
    let layer =
        (1.0 - eps_1q).powi((width - paired) as i32) * (1.0 - eps_2q).powi((paired / 2) as i32);
    layer.powf(depth as f64) * (1.0 - eps_meas).powi(width as i32)
}

/// Largest `d <= depth_max` with `success(d) >= tau` for a non-increasing
/// `success`, by bisection; 0 if even depth 1 fails.
pub fn scan_max_depth(depth_max: u64, tau: f64, success: impl Fn(u64) -> f64) -> u64 {
    if success(1) < tau {
        return 0;
    }
    let (mut lo, mut hi) = (1u64, depth_max);
    if success(hi) >= tau {
        return hi;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if success(mid) >= tau {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// `A * (p / p_th)^((d + 1) / 2)` by `powi`.
pub fn logical_rate(p: f64, p_th: f64, prefactor: f64, distance: u64) -> f64 {
    (prefactor * (p / p_th).powi(distance.div_ceil(2) as i32)).min(1.0)
}

/// Brute-force QEC frontier: for every width and every odd distance whose
/// cost `factor * d^2 * width` fits `budget`, the deepest logical program
/// with `(1 - p_L)^(width * depth) >= tau`. Maps width to `(depth, d)` with
/// the smallest distance attaining the best depth.
#[allow(clippy::too_many_arguments)]
pub fn brute_force_qec_frontier(
    budget: u64,
    p: f64,
    p_th: f64,
    prefactor: f64,
    factor: u64,
    max_distance: u64,
    tau: f64,
    depth_max: u64,
    width_max: u64,
) -> BTreeMap<u64, (u64, u64)> {
    let mut out = BTreeMap::new();
    for width in 1..=width_max {
        let mut best: Option<(u64, u64)> = None;
        let mut d = 3;
        while d <= max_distance {
            if factor * d * d * width <= budget {
                let pl = logical_rate(p, p_th, prefactor, d);
                // ln_1p: 1 - p_L rounds away most of a tiny p_L
                let per_slot = (-pl).ln_1p();
                let depth = scan_max_depth(depth_max, tau, |depth| {
                    (per_slot * width as f64 * depth as f64).exp()
                });
                if best.is_none_or(|(b, _)| depth > b) {
                    best = Some((depth, d));
                }
            }
            d += 2;
        }
        match best {
            Some(b) => {
                out.insert(width, b);
            }
            None => break,
        }
    }
    out
}

/// Distance between two finite doubles in units in the last place.
pub fn ulps_between(a: f64, b: f64) -> u64 {
    fn key(x: f64) -> i64 {
        let bits = x.to_bits() as i64;
        if bits < 0 {
            i64::MIN - bits
        } else {
            bits
        }
    }
    key(a).abs_diff(key(b))
}

/// Even-odd rule; points on an edge may land either way.
pub fn point_in_polygon(point: (f64, f64), polygon: &[(f64, f64)]) -> bool {
    let (px, py) = point;
    let mut inside = false;
    let n = polygon.len();
    for i in 0..n {
        let (x0, y0) = polygon[i];
        let (x1, y1) = polygon[(i + n - 1) % n];
        if (y0 > py) != (y1 > py) && px < (x1 - x0) * (py - y0) / (y1 - y0) + x0 {
            inside = !inside;
        }
    }
    inside
}

/// `(data-label, points)` for every `<polygon>` in an SVG document.
pub fn svg_polygons(svg: &str) -> Vec<(String, Vec<(f64, f64)>)> {
    let attr = |tag: &str, name: &str| -> Option<String> {
        let start = tag.find(&format!(" {name}=\""))? + name.len() + 3;
        let end = start + tag[start..].find('"')?;
        Some(tag[start..end].to_string())
    };
    svg.split("<polygon")
        .skip(1)
        .filter_map(|rest| {
            let tag = &rest[..rest.find("/>")?];
            let label = attr(tag, "data-label").unwrap_or_default();
            let points = attr(tag, "points")?
                .split_whitespace()
                .filter_map(|p| {
                    let (x, y) = p.split_once(',')?;
                    Some((x.parse().ok()?, y.parse().ok()?))
                })
                .collect();
            Some((label, points))
        })
        .collect()
}
