use super::{NumberFormat, Scalar};

/// One sample of a format's accuracy curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfilePoint {
    pub value: Scalar,
    pub log10_x: f64,
    pub digits: f64,
}

impl ProfilePoint {
    pub const CSV_HEADER: &'static str = "format,log10_x,digits";

    pub fn csv_row(&self) -> String {
        // Adding 0.0 turns -0.0 into 0.0.
        format!(
            "{},{:.6},{:.6}",
            self.value.format(),
            self.log10_x + 0.0,
            self.digits + 0.0
        )
    }
}

/// Accuracy in decimal digits across the positive dynamic range.
///
/// Samples `10^(k / points_per_decade)` for every `k` inside the range, snaps
/// each to the nearest representable value, and always includes the smallest
/// and largest positive values. Points are sorted and deduplicated.
pub fn accuracy_profile(format: NumberFormat, points_per_decade: u32) -> Vec<ProfilePoint> {
    assert!(
        points_per_decade >= 1,
        "points_per_decade must be at least 1"
    );
    let ppd = points_per_decade as f64;
    let (lo, hi) = (format.min_value(), format.max_value());
    let (lo_f, hi_f) = (lo.to_f64(), hi.to_f64());
    let first = (libm::log10(lo_f) * ppd).ceil() as i64;
    let last = (libm::log10(hi_f) * ppd).floor() as i64;
    let mut samples = vec![lo, hi];
    for k in first..=last {
        let x = libm::pow(10.0, k as f64 / ppd).clamp(lo_f, hi_f);
        samples.push(format.from_f64(x));
    }
    let mut points: Vec<ProfilePoint> = samples
        .into_iter()
        .map(|value| ProfilePoint {
            value,
            log10_x: libm::log10(value.to_f64()),
            digits: format.accuracy_at(value).expect("positive finite sample"),
        })
        .collect();
    points.sort_by(|a, b| a.log10_x.total_cmp(&b.log10_x));
    points.dedup_by_key(|p| p.value);
    points
}
