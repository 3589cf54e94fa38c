//! Self-contained SVG plots for the emitted data (no display, no deps).

/// One data point; flagged points are drawn hollow.
#[derive(Debug, Clone, Copy)]
pub struct PlotPoint {
    pub x: f64,
    pub y: f64,
    pub flagged: bool,
}

/// Log-log scatter with an optional fitted line y = e^intercept · x^slope.
pub fn loglog_plot(
    title: &str,
    x_label: &str,
    y_label: &str,
    points: &[PlotPoint],
    fit: Option<(f64, f64)>,
) -> String {
    let finite: Vec<PlotPoint> = points
        .iter()
        .copied()
        .filter(|p| p.x > 0.0 && p.y > 0.0)
        .collect();
    let log_points: Vec<(f64, f64, bool)> = finite
        .iter()
        .map(|p| (p.x.log10(), p.y.log10(), p.flagged))
        .collect();
    let fit_line = fit.map(|(slope, intercept)| {
        // In log10 coordinates the line is y = slope·x + intercept/ln(10).
        move |lx: f64| slope * lx + intercept / std::f64::consts::LN_10
    });
    render(title, x_label, y_label, &log_points, fit_line, true)
}

/// Linear scatter-and-polyline.
pub fn xy_plot(title: &str, x_label: &str, y_label: &str, points: &[PlotPoint]) -> String {
    let data: Vec<(f64, f64, bool)> = points.iter().map(|p| (p.x, p.y, p.flagged)).collect();
    render(title, x_label, y_label, &data, None::<fn(f64) -> f64>, false)
}

fn render(
    title: &str,
    x_label: &str,
    y_label: &str,
    data: &[(f64, f64, bool)],
    fit_line: Option<impl Fn(f64) -> f64>,
    log_ticks: bool,
) -> String {
    const W: f64 = 640.0;
    const H: f64 = 440.0;
    const ML: f64 = 70.0; // left margin
    const MR: f64 = 25.0;
    const MT: f64 = 45.0;
    const MB: f64 = 55.0;

    let (mut x0, mut x1) = bounds(data.iter().map(|d| d.0));
    let (mut y0, mut y1) = bounds(data.iter().map(|d| d.1));
    if x1 - x0 < 1e-12 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if y1 - y0 < 1e-12 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let pad_x = 0.05 * (x1 - x0);
    let pad_y = 0.08 * (y1 - y0);
    x0 -= pad_x;
    x1 += pad_x;
    y0 -= pad_y;
    y1 += pad_y;

    let sx = move |x: f64| ML + (x - x0) / (x1 - x0) * (W - ML - MR);
    let sy = move |y: f64| H - MB - (y - y0) / (y1 - y0) * (H - MT - MB);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         viewBox=\"0 0 {W} {H}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"24\" font-family=\"monospace\" font-size=\"15\" \
         text-anchor=\"middle\">{}</text>\n",
        W / 2.0,
        escape(title)
    ));

    // Axes box.
    svg.push_str(&format!(
        "<rect x=\"{ML}\" y=\"{MT}\" width=\"{}\" height=\"{}\" fill=\"none\" \
         stroke=\"black\" stroke-width=\"1\"/>\n",
        W - ML - MR,
        H - MT - MB
    ));

    // Ticks: five per axis.
    for i in 0..=4 {
        let fx = x0 + (x1 - x0) * i as f64 / 4.0;
        let fy = y0 + (y1 - y0) * i as f64 / 4.0;
        let px = sx(fx);
        let py = sy(fy);
        svg.push_str(&format!(
            "<line x1=\"{px}\" y1=\"{}\" x2=\"{px}\" y2=\"{}\" stroke=\"black\"/>\n",
            H - MB,
            H - MB + 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{px}\" y=\"{}\" font-family=\"monospace\" font-size=\"11\" \
             text-anchor=\"middle\">{}</text>\n",
            H - MB + 18.0,
            tick_label(fx, log_ticks)
        ));
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{py}\" x2=\"{ML}\" y2=\"{py}\" stroke=\"black\"/>\n",
            ML - 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"11\" \
             text-anchor=\"end\">{}</text>\n",
            ML - 8.0,
            py + 4.0,
            tick_label(fy, log_ticks)
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"13\" \
         text-anchor=\"middle\">{}</text>\n",
        (ML + W - MR) / 2.0,
        H - 12.0,
        escape(x_label)
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{}\" font-family=\"monospace\" font-size=\"13\" \
         text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>\n",
        (MT + H - MB) / 2.0,
        (MT + H - MB) / 2.0,
        escape(y_label)
    ));

    // Fitted line across the frame.
    if let Some(line) = fit_line {
        let (lx0, lx1) = (x0, x1);
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#c0392b\" \
             stroke-width=\"1.5\" stroke-dasharray=\"6 3\"/>\n",
            sx(lx0),
            sy(line(lx0)),
            sx(lx1),
            sy(line(lx1))
        ));
    }

    // Connecting polyline then markers.
    if data.len() > 1 {
        let path: Vec<String> = data
            .iter()
            .map(|&(x, y, _)| format!("{},{}", sx(x), sy(y)))
            .collect();
        svg.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"#2c3e50\" stroke-width=\"1\"/>\n",
            path.join(" ")
        ));
    }
    for &(x, y, flagged) in data {
        let fill = if flagged { "white" } else { "#2c3e50" };
        svg.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"{fill}\" stroke=\"#2c3e50\" \
             stroke-width=\"1.5\"/>\n",
            sx(x),
            sy(y)
        ));
    }

    svg.push_str("</svg>\n");
    svg
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() || !hi.is_finite() {
        (0.0, 1.0)
    } else {
        (lo, hi)
    }
}

fn tick_label(value: f64, log_ticks: bool) -> String {
    if log_ticks {
        format!("1e{value:.1}")
    } else {
        format!("{value:.3}")
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
