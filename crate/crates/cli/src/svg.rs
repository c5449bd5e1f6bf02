//! Minimal static SVG rendering: theory curves as polylines, empirical
//! estimates as dots, optional shaded bands along the x axis. No scripting,
//! no external assets.

pub struct Series {
    pub name: String,
    pub empirical: Vec<(f64, f64)>,
    pub theory: Vec<(f64, f64)>,
}

pub struct Band {
    pub from: f64,
    pub to: f64,
    pub label: &'static str,
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 130.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 50.0;

const COLORS: [&str; 5] = ["#1f6fb2", "#c85a19", "#2c8a4b", "#8a2c7a", "#6b6b6b"];

pub fn render(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[Series],
    bands: &[Band],
) -> String {
    let mut xs: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    for s in series {
        for &(x, y) in s.empirical.iter().chain(s.theory.iter()) {
            xs.push(x);
            ys.push(y);
        }
    }
    let (x_min, x_max) = padded_range(&xs, 0.02);
    let (y_min, y_max) = padded_range(&ys, 0.08);
    let to_px = |x: f64, y: f64| -> (f64, f64) {
        let px = MARGIN_L + (x - x_min) / (x_max - x_min) * (WIDTH - MARGIN_L - MARGIN_R);
        let py = HEIGHT - MARGIN_B - (y - y_min) / (y_max - y_min) * (HEIGHT - MARGIN_T - MARGIN_B);
        (px, py)
    };

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    let shades = ["#00000010", "#00000020", "#00000030"];
    for (i, band) in bands.iter().enumerate() {
        let (x0, _) = to_px(band.from.max(x_min), 0.0);
        let (x1, _) = to_px(band.to.min(x_max), 0.0);
        out.push_str(&format!(
            "<rect x=\"{:.2}\" y=\"{MARGIN_T}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{}\"/>\n",
            x0,
            (x1 - x0).max(0.0),
            HEIGHT - MARGIN_T - MARGIN_B,
            shades[i % shades.len()],
        ));
        out.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\" fill=\"#333\">{}</text>\n",
            0.5 * (x0 + x1),
            MARGIN_T + 14.0,
            band.label,
        ));
    }

    // Axes.
    let (ox, oy) = to_px(x_min, y_min);
    let (x_end, _) = to_px(x_max, y_min);
    let (_, y_end) = to_px(x_min, y_max);
    out.push_str(&format!(
        "<line x1=\"{ox:.2}\" y1=\"{oy:.2}\" x2=\"{x_end:.2}\" y2=\"{oy:.2}\" stroke=\"black\"/>\n"
    ));
    out.push_str(&format!(
        "<line x1=\"{ox:.2}\" y1=\"{oy:.2}\" x2=\"{ox:.2}\" y2=\"{y_end:.2}\" stroke=\"black\"/>\n"
    ));
    for frac in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let xv = x_min + frac * (x_max - x_min);
        let yv = y_min + frac * (y_max - y_min);
        let (px, _) = to_px(xv, y_min);
        let (_, py) = to_px(x_min, yv);
        out.push_str(&format!(
            "<line x1=\"{px:.2}\" y1=\"{oy:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
            oy + 4.0
        ));
        out.push_str(&format!(
            "<text x=\"{px:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
            oy + 18.0,
            trim_num(xv)
        ));
        out.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{ox:.2}\" y2=\"{py:.2}\" stroke=\"black\"/>\n",
            ox - 4.0
        ));
        out.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"end\">{}</text>\n",
            ox - 8.0,
            py + 4.0,
            trim_num(yv)
        ));
    }
    out.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\">{x_label}</text>\n",
        0.5 * (MARGIN_L + WIDTH - MARGIN_R),
        HEIGHT - 12.0
    ));
    out.push_str(&format!(
        "<text x=\"16\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.2})\">{y_label}</text>\n",
        0.5 * (MARGIN_T + HEIGHT - MARGIN_B),
        0.5 * (MARGIN_T + HEIGHT - MARGIN_B)
    ));
    out.push_str(&format!(
        "<text x=\"{:.2}\" y=\"22\" font-size=\"15\" text-anchor=\"middle\">{title}</text>\n",
        WIDTH / 2.0
    ));

    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        if s.theory.len() > 1 {
            let pts: Vec<String> = s
                .theory
                .iter()
                .map(|&(x, y)| {
                    let (px, py) = to_px(x, y);
                    format!("{px:.2},{py:.2}")
                })
                .collect();
            out.push_str(&format!(
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
                pts.join(" ")
            ));
        }
        for &(x, y) in &s.empirical {
            let (px, py) = to_px(x, y);
            out.push_str(&format!(
                "<circle cx=\"{px:.2}\" cy=\"{py:.2}\" r=\"3\" fill=\"{color}\" fill-opacity=\"0.7\"/>\n"
            ));
        }
        let ly = MARGIN_T + 18.0 * i as f64 + 10.0;
        let lx = WIDTH - MARGIN_R + 12.0;
        out.push_str(&format!(
            "<circle cx=\"{lx:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"{color}\"/>\n",
            ly - 4.0
        ));
        out.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{ly:.2}\" font-size=\"12\">{}</text>\n",
            lx + 10.0,
            s.name
        ));
    }
    out.push_str("</svg>\n");
    out
}

fn padded_range(values: &[f64], pad: f64) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in values {
        if v.is_finite() {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        return (lo - 0.5, hi + 0.5);
    }
    let span = hi - lo;
    (lo - pad * span, hi + pad * span)
}

fn trim_num(v: f64) -> String {
    let s = format!("{v:.3}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}
