//! Post-processing of multiplier fields.

use fibrefilm_core::PressureField;

/// A maximal periodic run of nodes where `|λ'| < slope`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plateau {
    /// Position of the first node of the run.
    pub start: f64,
    pub nodes: usize,
    /// Run length as a fraction of the domain.
    pub fraction: f64,
    pub mean: f64,
}

/// Flat stretches of `field`, longest first. The derivative is the centred
/// periodic difference.
pub fn plateaus(field: &PressureField, slope: f64) -> Vec<Plateau> {
    let v = field.values();
    let n = v.len();
    let h = field.grid().spacing();
    let flat: Vec<bool> = (0..n).map(|i| ((v[(i + 1) % n] - v[(i + n - 1) % n]) / (2.0 * h)).abs() < slope).collect();
    let mut out = Vec::new();
    let Some(start) = (0..n).find(|&i| !flat[i]) else {
        let mean = v.iter().sum::<f64>() / n as f64;
        return vec![Plateau { start: 0.0, nodes: n, fraction: 1.0, mean }];
    };
    let mut i = 0;
    while i < n {
        let k = (start + i) % n;
        if !flat[k] {
            i += 1;
            continue;
        }
        let (mut len, mut sum) = (0, 0.0);
        while i < n && flat[(start + i) % n] {
            sum += v[(start + i) % n];
            len += 1;
            i += 1;
        }
        out.push(Plateau { start: k as f64 * h, nodes: len, fraction: len as f64 / n as f64, mean: sum / len as f64 });
    }
    out.sort_by(|a, b| b.nodes.cmp(&a.nodes).then(a.start.total_cmp(&b.start)));
    out
}
