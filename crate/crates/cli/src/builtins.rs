//! Scenarios bundled with the binary.

pub const BUILTINS: &[(&str, &str)] = &[
    ("point", include_str!("../scenarios/point.json")),
    ("sierpinski", include_str!("../scenarios/sierpinski.json")),
    ("pseudocircle", include_str!("../scenarios/pseudocircle.json")),
    ("pseudocircle-pair", include_str!("../scenarios/pseudocircle-pair.json")),
    ("three-set-cover", include_str!("../scenarios/three-set-cover.json")),
    ("bad-cover", include_str!("../scenarios/bad-cover.json")),
    ("co-mapping-cone", include_str!("../scenarios/co-mapping-cone.json")),
    ("arc-embedding", include_str!("../scenarios/arc-embedding.json")),
    ("cone-map", include_str!("../scenarios/cone-map.json")),
];

pub fn get(name: &str) -> Option<&'static str> {
    BUILTINS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn names() -> impl Iterator<Item = &'static str> {
    BUILTINS.iter().map(|(n, _)| *n)
}
