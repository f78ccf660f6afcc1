use rama_core::cayley::CayleyGraph;
use rama_core::pgl::ProjMatrix;

/// A vertex given as an index, entries `a,b,c,d`, or one of `I`, `W`, `Iprime:q`.
pub fn parse_vertex(g: &CayleyGraph, spec: &str) -> Result<u32, String> {
    let spec = spec.trim();
    if let Ok(idx) = spec.parse::<u32>() {
        if idx as usize >= g.n() {
            return Err(format!("vertex index {idx} out of range for {} vertices", g.n()));
        }
        return Ok(idx);
    }
    let m = g.modulus();
    let raw: [i64; 4] = match spec {
        "I" => [1, 0, 0, 1],
        "W" => [0, 1, -1, 0],
        _ => {
            if let Some(q) = spec.strip_prefix("Iprime:") {
                let q: i64 = q.parse().map_err(|_| format!("bad Iprime modulus {q:?}"))?;
                [1, q, 0, 1]
            } else {
                let parts: Vec<i64> = spec
                    .split(',')
                    .map(|t| t.trim().parse::<i64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| format!("cannot parse matrix {spec:?}; expected a,b,c,d, I, W or Iprime:q"))?;
                parts
                    .try_into()
                    .map_err(|_| format!("matrix {spec:?} needs exactly 4 entries"))?
            }
        }
    };
    let x = ProjMatrix::canonical(raw, m, g.kind()).map_err(|e| e.to_string())?;
    let table = g.vertex_table().map_err(|e| e.to_string())?;
    table
        .index_of(&x)
        .ok_or_else(|| format!("{x} is not a vertex of this graph"))
}
