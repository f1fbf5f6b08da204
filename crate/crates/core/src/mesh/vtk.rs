use super::active::ActiveMesh;
use super::split::SubspaceSplit;
use crate::scalar::Real;
use std::io::Write;

/// Writes the active cells as an ASCII legacy VTK unstructured grid with the
/// cell scalar `cut` (0 interior, 1 cut) and the point scalar `dof_class`
/// (0 interior dof, 1 boundary dof).
pub fn write_vtk<T: Real, W: Write>(mesh: &ActiveMesh<T>, split: &SubspaceSplit, mut w: W) -> std::io::Result<()> {
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "fictitious domain level {}", mesh.level())?;
    writeln!(w, "ASCII")?;
    writeln!(w, "DATASET UNSTRUCTURED_GRID")?;
    writeln!(w, "POINTS {} double", split.n())?;
    for v in &split.dof_vertex {
        let x = mesh.lattice.coords(v);
        writeln!(w, "{} {} {}", x[0], x[1], x[2])?;
    }
    let nc = mesh.cells.len();
    writeln!(w, "CELLS {} {}", nc, nc * 5)?;
    for d in &split.cell_dofs {
        writeln!(w, "4 {} {} {} {}", d[0], d[1], d[2], d[3])?;
    }
    writeln!(w, "CELL_TYPES {nc}")?;
    for _ in 0..nc {
        writeln!(w, "10")?;
    }
    writeln!(w, "CELL_DATA {nc}")?;
    writeln!(w, "SCALARS cut int 1")?;
    writeln!(w, "LOOKUP_TABLE default")?;
    for c in &mesh.cells {
        writeln!(w, "{}", u8::from(c.is_cut))?;
    }
    writeln!(w, "POINT_DATA {}", split.n())?;
    writeln!(w, "SCALARS dof_class int 1")?;
    writeln!(w, "LOOKUP_TABLE default")?;
    for dof in 0..split.n() {
        writeln!(w, "{}", u8::from(!split.is_interior(dof)))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Sphere;
    use crate::mesh::{build_active_mesh, classify_dofs};

    #[test]
    fn vtk_sections_have_consistent_counts() {
        let s = Sphere::new([0.001, 0.002, 0.003], 1.0).unwrap();
        let mesh = build_active_mesh::<f64, _>(0, &s).unwrap();
        let split = classify_dofs(&mesh);
        let mut buf = Vec::new();
        write_vtk(&mesh, &split, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# vtk DataFile Version 3.0\n"));
        assert!(text.contains(&format!("POINTS {} double", split.n())));
        assert!(text.contains(&format!("CELLS {} {}", mesh.cells.len(), 5 * mesh.cells.len())));
        let cut_ones = text
            .split("SCALARS cut int 1\nLOOKUP_TABLE default\n")
            .nth(1)
            .unwrap()
            .lines()
            .take(mesh.cells.len())
            .filter(|l| *l == "1")
            .count();
        assert_eq!(cut_ones, mesh.cut_cells.len());
    }
}
