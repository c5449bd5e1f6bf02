//! Grid parsing: comma lists (`1,1.5,2`) or ranges (`start:stop:step`,
//! inclusive of `stop` up to a half-step of rounding slack).

#[derive(Debug, thiserror::Error)]
#[error("bad grid `{input}`: {message}")]
pub struct GridError {
    pub input: String,
    pub message: String,
}

fn fail(input: &str, message: impl Into<String>) -> GridError {
    GridError { input: input.to_string(), message: message.into() }
}

pub fn parse_f64_grid(input: &str) -> Result<Vec<f64>, GridError> {
    let values = if input.contains(':') {
        let parts: Vec<&str> = input.split(':').collect();
        if parts.len() != 3 {
            return Err(fail(input, "ranges are start:stop:step"));
        }
        let start: f64 = parts[0].parse().map_err(|_| fail(input, "bad start"))?;
        let stop: f64 = parts[1].parse().map_err(|_| fail(input, "bad stop"))?;
        let step: f64 = parts[2].parse().map_err(|_| fail(input, "bad step"))?;
        if step <= 0.0 || stop < start {
            return Err(fail(input, "need step > 0 and stop >= start"));
        }
        let count = ((stop - start) / step + 0.5).floor() as usize + 1;
        (0..count).map(|k| start + step * k as f64).collect()
    } else {
        input
            .split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| fail(input, format!("bad number `{s}`"))))
            .collect::<Result<Vec<f64>, _>>()?
    };
    if values.is_empty() {
        return Err(fail(input, "empty grid"));
    }
    Ok(values)
}

pub fn parse_u64_grid(input: &str) -> Result<Vec<u64>, GridError> {
    if input.contains(':') {
        let parts: Vec<&str> = input.split(':').collect();
        if parts.len() != 3 {
            return Err(fail(input, "ranges are start:stop:step"));
        }
        let start: u64 = parts[0].parse().map_err(|_| fail(input, "bad start"))?;
        let stop: u64 = parts[1].parse().map_err(|_| fail(input, "bad stop"))?;
        let step: u64 = parts[2].parse().map_err(|_| fail(input, "bad step"))?;
        if step == 0 || stop < start {
            return Err(fail(input, "need step > 0 and stop >= start"));
        }
        Ok((start..=stop).step_by(step as usize).collect())
    } else {
        let v = input
            .split(',')
            .map(|s| s.trim().parse::<u64>().map_err(|_| fail(input, format!("bad count `{s}`"))))
            .collect::<Result<Vec<u64>, _>>()?;
        if v.is_empty() {
            return Err(fail(input, "empty grid"));
        }
        Ok(v)
    }
}

/// Default budget grid: 12 points per regime, spanning the transport band
/// `[1, lower]`, the policy-improvement band `(lower, upper]` and a
/// saturation band `(upper, 1.5 * upper]` computed from the scenario's
/// breakpoints. Collapses to two bands when the breakpoints coincide.
pub fn auto_beta_grid(s: f64, s_ver: f64) -> Vec<f64> {
    let lower = (1.0 / s).min(1.0 / s_ver);
    let upper = (1.0 / s).max(1.0 / s_ver);
    let points_per_band = 12;
    let mut grid = Vec::new();
    let band = |from: f64, to: f64, grid: &mut Vec<f64>| {
        for k in 1..=points_per_band {
            grid.push(from + (to - from) * k as f64 / points_per_band as f64);
        }
    };
    grid.push(1.0);
    band(1.0, lower, &mut grid);
    if upper > lower {
        band(lower, upper, &mut grid);
    }
    band(upper, 1.5 * upper, &mut grid);
    grid.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    grid
}
