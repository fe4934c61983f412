pub mod corpus;
pub mod decide;
pub mod exactla;
pub mod geomctrl;
pub mod io;
pub mod par;
pub mod polyhedra;
pub mod setmaps;
