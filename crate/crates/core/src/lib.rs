pub mod cech;
pub mod cylinder;
pub mod finspace;
pub mod godement;
pub mod homalg;
pub mod ratlin;
pub mod verdict;
