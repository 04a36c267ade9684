#pragma once

#include <array>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bioconv/errors.hpp"

namespace bioconv {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// An edge of the triangulation. Vertices are stored in increasing index
/// order; adjacent cells are stored in increasing index order so that
/// cells[0] always owns the positive normal.
struct Facet {
  std::array<int, 2> vertices{};
  std::array<int, 2> cells{-1, -1};
  int n_cells = 0;
  int marker = 0;  // boundary tag, 0 for interior facets

  bool is_boundary() const { return n_cells == 1; }
};

struct FacetGeometry {
  Vec2 normal;   // from cells[0] towards cells[1] (outward on the boundary)
  Vec2 tangent;  // (-n_2, n_1)
  Vec2 midpoint;
  double length = 0.0;
};

/// Boundary tags keyed by sorted vertex pair.
using BoundaryTags = std::map<std::pair<int, int>, int>;

/**
 * Conforming triangulation of a planar polygonal domain.
 *
 * Cells are stored counterclockwise. Local edge i of a cell is the edge
 * opposite local vertex i, i.e. it joins vertices (i+1)%3 and (i+2)%3.
 * Facets are numbered in lexicographic order of their sorted vertex pairs.
 */
class Triangulation {
 public:
  Triangulation() = default;

  /// Builds facet topology. Clockwise cells are reoriented. Boundary facets
  /// missing from `tags` get tag 1. Throws ParameterError when the input is
  /// not a conforming triangulation.
  Triangulation(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> cells,
                const BoundaryTags& tags = {});

  int n_vertices() const { return static_cast<int>(vertices_.size()); }
  int n_cells() const { return static_cast<int>(cells_.size()); }
  int n_facets() const { return static_cast<int>(facets_.size()); }
  bool empty() const { return cells_.empty(); }

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& cells() const { return cells_; }
  const std::vector<Facet>& facets() const { return facets_; }

  const Vec2& vertex(int v) const { return vertices_[v]; }
  const std::array<int, 3>& cell(int c) const { return cells_[c]; }
  const Facet& facet(int f) const { return facets_[f]; }

  /// Global facet index of local edge i (opposite local vertex i).
  const std::array<int, 3>& cell_facets(int c) const { return cell_facets_[c]; }

  double cell_area(int c) const;
  double cell_diameter(int c) const { return cell_diameters_[c]; }
  double facet_length(int f) const { return facet_lengths_[f]; }
  Vec2 cell_barycenter(int c) const;

  /// Largest cell diameter.
  double max_diameter() const;
  double min_angle() const;  // radians
  double domain_area() const;

  FacetGeometry facet_geometry(int f) const;

  /// Euler characteristic V - E + M.
  int euler_characteristic() const { return n_vertices() - n_facets() + n_cells(); }

  /// Boundary tags in the form accepted by the constructor.
  BoundaryTags boundary_tags() const;

 private:
  std::vector<Vec2> vertices_;
  std::vector<std::array<int, 3>> cells_;
  std::vector<Facet> facets_;
  std::vector<std::array<int, 3>> cell_facets_;
  std::vector<double> cell_diameters_;
  std::vector<double> facet_lengths_;
};

/// Macro mesh together with its barycentric (Alfeld) refinement.
struct MeshHierarchy {
  Triangulation macro;
  Triangulation bary;
  std::vector<int> child_of;  // bary cell -> macro cell
};

/// Structured triangulation of [x0,x1]x[y0,y1] with each of the nx*ny
/// rectangles split along its (x0,y0)-(x1,y1) diagonal.
Triangulation build_rectangle(double x0, double y0, double x1, double y1, int nx, int ny);

/// (-1,1)^2 without the open fourth quadrant, built from 2n x 2n squares
/// of which the n x n lower-right block is dropped. Reentrant corner at 0.
Triangulation build_lshape(int n);

/// Splits every cell into three by joining its barycenter to its vertices.
/// The new vertex of macro cell c has index V + c; bary cells 3c..3c+2 are
/// the children of c.
MeshHierarchy barycentric_refine(const Triangulation& mesh);

/// Longest-edge bisection of the marked cells with conformity closure.
/// If `parent_of` is given it receives, for every output cell, the index of
/// the input cell that contains it.
Triangulation refine_marked(const Triangulation& mesh, std::span<const int> marks,
                            std::vector<int>* parent_of = nullptr);

/// Two sweeps of refine_marked over all cells: every cell is split into four.
Triangulation refine_uniform(const Triangulation& mesh, std::vector<int>* parent_of = nullptr);

/// Barycentric coordinates of x with respect to cell c.
Eigen::Vector3d barycentric_coordinates(const Triangulation& mesh, int c, const Vec2& x);

}  // namespace bioconv
