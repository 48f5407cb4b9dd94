#ifndef CAUCHYCR_SPACE_HPP
#define CAUCHYCR_SPACE_HPP

#include <array>
#include <iosfwd>
#include <set>
#include <vector>

#include "cauchycr/mesh.hpp"
#include "cauchycr/util.hpp"

namespace cauchycr {

/// Nonconforming piecewise-affine space with one degree of freedom per face,
/// the face mean value. Faces on the essential boundary parts carry no DOF
/// (their mean is pinned to zero); an empty essential set gives the fully
/// unconstrained space used by the weak-BC formulation.
class Space {
public:
  Space(const Mesh& mesh, std::set<BoundaryPart> essential = {});

  const Mesh& mesh() const { return *mesh_; }
  int n_dofs() const { return n_dofs_; }
  /// DOF index of a face, or -1 when the face mean is constrained to zero.
  int dof_of_face(int f) const { return dof_of_face_[static_cast<std::size_t>(f)]; }
  int face_of_dof(int d) const { return face_of_dof_[static_cast<std::size_t>(d)]; }
  const std::set<BoundaryPart>& essential_part() const { return essential_; }

  bool same_mesh(const Space& other) const { return mesh_ == other.mesh_; }

private:
  const Mesh* mesh_;
  std::set<BoundaryPart> essential_;
  std::vector<int> dof_of_face_;
  std::vector<int> face_of_dof_;
  int n_dofs_ = 0;
};

/// CR basis function of local face `lf` on triangle `t`, evaluated at (x,y):
/// phi = 1 - 2*lambda, with the constant element gradient. Evaluation
/// outside the element extrapolates the affine function.
std::array<double, 3> basis_eval(const Mesh& mesh, int t, int lf, double x, double y); // {value, gx, gy}

/// Coefficient vector over the DOFs of a Space.
struct FEFunction {
  const Space* space = nullptr;
  std::vector<double> coeff;

  explicit FEFunction(const Space& s) : space(&s), coeff(static_cast<std::size_t>(s.n_dofs()), 0.0) {}

  /// Coefficient seen by element assembly: 0 on essential faces.
  double face_value(int f) const {
    const int d = space->dof_of_face(f);
    return d < 0 ? 0.0 : coeff[static_cast<std::size_t>(d)];
  }
  /// Value of the piecewise-affine field at (x,y) inside triangle t.
  double eval_on_tri(int t, double x, double y) const;
  /// Constant gradient on triangle t.
  std::array<double, 2> grad_on_tri(int t) const;
};

/// Face-mean interpolant: coefficient on F = |F|^-1 \int_F v ds, computed
/// with a Gauss rule of the given degree. Coefficients of essential faces
/// are dropped (the space pins them to zero).
FEFunction interpolate(const Space& space, const ScalarField& v, int face_degree = 9);

/// Mean of the jump of fe over a face (single-sided trace on the boundary).
/// Orientation follows the stored face normal.
double jump_mean(const FEFunction& fe, int f);

/// Trace values of fe on face f from the given side (0 = the element the
/// normal points away from, 1 = the element it points into), at the given
/// arc-length parameters s in [0,1] along the face.
std::vector<double> trace_values(const FEFunction& fe, int f, int side,
                                 const std::vector<double>& s_params);

/// Continuous piecewise-affine field defined by vertex values.
struct VertexField {
  const Mesh* mesh = nullptr;
  std::vector<double> values;

  double eval_on_tri(int t, double x, double y) const;
  std::array<double, 2> grad_on_tri(int t) const;
};

/// Conforming part of a CR field: each vertex takes the average of the
/// per-element traces over all elements containing it; vertices on the
/// closure of `zero_on` are set to zero.
VertexField conforming_part(const FEFunction& fe, const std::set<BoundaryPart>& zero_on);

/// CSV export: `face_index, midpoint_x, midpoint_y, coefficient` rows.
void write_fefunction_csv(const FEFunction& fe, std::ostream& os);

} // namespace cauchycr

#endif
