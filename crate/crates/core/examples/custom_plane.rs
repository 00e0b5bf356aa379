//! Defines color planes by hand. Planes that leave the sRGB gamut are
//! rejected with the worst sample.

use somchroma::colorspace::{BRule, ColorPlane};

fn main() {
    let muted = ColorPlane {
        name: "muted-teal-rose".into(),
        l_range: [45.0, 75.0],
        a_range: [-20.0, 20.0],
        b_rule: BRule::Constant(0.0),
    };
    let vivid = ColorPlane {
        name: "vivid".into(),
        a_range: [-80.0, 80.0],
        ..muted.clone()
    };
    for plane in [muted, vivid] {
        let json = serde_json::to_string(&plane).unwrap();
        match plane.validated() {
            Ok(p) => println!("accepted {}: {json}", p.name),
            Err(e) => println!("rejected: {e}"),
        }
    }
}
