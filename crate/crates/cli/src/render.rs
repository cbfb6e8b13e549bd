//! SVG rendering of d=2 configurations: open faces as black segments,
//! hole cells shaded, the hole graph overlaid, infinity-touching dual
//! clusters in gray. Output is byte-stable for a given configuration.

use holeperc::clusters::dual_clusters;
use holeperc::config::Configuration;
use holeperc::holes::build_hole_graph;

const SCALE: f64 = 40.0;
const PAD: f64 = 20.0;

pub fn render_svg(cfg: &Configuration) -> Result<String, String> {
    let w = cfg.window;
    if w.d() != 2 {
        return Err(format!("render supports d=2 only, got d={}", w.d()));
    }
    let n = w.n() as f64;
    let px = |x: f64| PAD + (x + n) * SCALE;
    let py = |y: f64| PAD + (n - y) * SCALE;
    let size = 2.0 * PAD + 2.0 * n * SCALE;

    let lab = dual_clusters(cfg);
    let graph = build_hole_graph(cfg);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size:.0}\" height=\"{size:.0}\" \
         viewBox=\"0 0 {size:.0} {size:.0}\">\n"
    ));
    svg.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{size:.0}\" height=\"{size:.0}\" fill=\"white\"/>\n"
    ));

    // occupied cells: gray for infinity-touching dual clusters, blue for holes
    w.for_each_dual(|idx, coords| {
        let info = lab.cluster(lab.cluster_of(idx).expect("labeled"));
        let fill = if info.touches_infinity {
            "#e8e8e8"
        } else {
            "#bcd9f0"
        };
        let (cx, cy) = (coords[0] as f64, coords[1] as f64);
        svg.push_str(&format!(
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{}\"/>\n",
            px(cx),
            py(cy + 1.0),
            SCALE,
            SCALE,
            fill
        ));
    });

    // window frame
    svg.push_str(&format!(
        "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" \
         stroke=\"#999999\" stroke-width=\"1\"/>\n",
        px(-n),
        py(n),
        2.0 * n * SCALE,
        2.0 * n * SCALE
    ));

    // open faces are unit segments in d=2
    w.for_each_face(|idx, axis, anchor| {
        if !cfg.is_open(idx) {
            return;
        }
        let (x0, y0) = (anchor[0] as f64, anchor[1] as f64);
        let (x1, y1) = if axis == 0 {
            (x0, y0 + 1.0)
        } else {
            (x0 + 1.0, y0)
        };
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" \
             stroke=\"black\" stroke-width=\"3\" stroke-linecap=\"square\"/>\n",
            px(x0),
            py(y0),
            px(x1),
            py(y1)
        ));
    });

    // hole graph on top: centroids of member cells
    let centroid = |hole: &holeperc::holes::Hole| -> (f64, f64) {
        let mut sx = 0.0;
        let mut sy = 0.0;
        for &v in &hole.members {
            let dv = w.dual_at(v);
            sx += dv.coords[0] as f64 + 0.5;
            sy += dv.coords[1] as f64 + 0.5;
        }
        let k = hole.members.len() as f64;
        (sx / k, sy / k)
    };
    for &(a, b) in &graph.edges {
        let (ax, ay) = centroid(&graph.holes[a as usize]);
        let (bx, by) = centroid(&graph.holes[b as usize]);
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" \
             stroke=\"#1a5276\" stroke-width=\"1.5\"/>\n",
            px(ax),
            py(ay),
            px(bx),
            py(by)
        ));
    }
    for hole in &graph.holes {
        let (cx, cy) = centroid(hole);
        svg.push_str(&format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"#1a5276\"/>\n",
            px(cx),
            py(cy)
        ));
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use holeperc::config::{sample_configuration, SimulationParams};
    use holeperc::lattice::Dim;

    #[test]
    fn renders_deterministically() {
        let params = SimulationParams {
            p: 0.55,
            d: Dim::new(2).unwrap(),
            n: 4,
            replicates: 1,
            seed: 11,
        };
        let cfg = sample_configuration(&params, 0);
        let a = render_svg(&cfg).unwrap();
        let b = render_svg(&cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.contains("circle"));
    }

    #[test]
    fn framed_cell_draws_one_hole_vertex() {
        use holeperc::config::Configuration;
        use holeperc::lattice::{Face, Window};
        let w = Window::new(Dim::new(2).unwrap(), 2);
        let mut cfg = Configuration::all_closed(w);
        for (axis, anchor) in [
            (0usize, vec![0i64, 0]),
            (0, vec![1, 0]),
            (1, vec![0, 0]),
            (1, vec![0, 1]),
        ] {
            cfg.set_open(w.face_index(&Face { axis, anchor }).unwrap(), true);
        }
        let svg = render_svg(&cfg).unwrap();
        assert_eq!(svg.matches("<circle").count(), 1);
        assert_eq!(svg.matches("stroke=\"black\"").count(), 4);
    }

    #[test]
    fn rejects_three_dimensions() {
        let params = SimulationParams {
            p: 0.5,
            d: Dim::new(3).unwrap(),
            n: 2,
            replicates: 1,
            seed: 1,
        };
        let cfg = sample_configuration(&params, 0);
        assert!(render_svg(&cfg).is_err());
    }
}
