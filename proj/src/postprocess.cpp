#include "mpflux/postprocess.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "mpflux/errors.hpp"
#include "mpflux/quadrature.hpp"

namespace mpflux {

const std::vector<Poly>& pk_monomials(int dim, int degree) {
  static std::map<std::pair<int, int>, std::vector<Poly>> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_pair(dim, degree);
  auto it = cache.find(key);
  if (it == cache.end()) {
    std::vector<Poly> monos;
    for (int total = 0; total <= degree; ++total)
      for (int a = total; a >= 0; --a)
        for (int b = total - a; b >= 0; --b) {
          int c = total - a - b;
          if (dim == 2 && c > 0) continue;
          monos.push_back(Poly::monomial(a, b, c));
        }
    it = cache.emplace(key, std::move(monos)).first;
  }
  return it->second;
}

double CellwisePoly::eval(const Mesh& mesh, int cell, const Vec& xhat) const {
  const auto& monos = pk_monomials(mesh.dim, degree);
  double s = 0;
  for (std::size_t k = 0; k < monos.size(); ++k) s += coeffs[cell][k] * monos[k](xhat);
  return s;
}

Vec velocity_at(const Mesh& mesh, const DofMap& dm, const Eigen::VectorXd& u, int cell,
                const Vec& xhat) {
  const auto& def = reference_element(mesh.cells[cell].shape, dm.order);
  Vec vhat{};
  for (int i = 0; i < def.velocity_count(); ++i) {
    const auto& [gdof, scale] = dm.cell_velocity[cell][i];
    vhat += def.velocity[i].value(xhat) * (scale * u[gdof]);
  }
  return mesh.maps[cell].piola(vhat);
}

double pressure_at(const Mesh& mesh, const DofMap& dm, const Eigen::VectorXd& p, int cell,
                   const Vec& xhat) {
  const auto& def = reference_element(mesh.cells[cell].shape, dm.order);
  double s = 0;
  for (int q = 0; q < def.pressure_count(); ++q)
    s += p[dm.pressure_offset[cell] + q] * def.pressure[q](xhat);
  return s;
}

CellwisePoly stenberg_postprocess(const Mesh& mesh, const DofMap& dm, const ProblemData& data,
                                  const Eigen::VectorXd& u, const Eigen::VectorXd& p,
                                  int degree, int quad_degree) {
  const auto& monos = pk_monomials(mesh.dim, degree);
  const int nm = static_cast<int>(monos.size());
  CellwisePoly out;
  out.degree = degree;
  out.coeffs.resize(mesh.num_cells());

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellShape shape = mesh.cells[c].shape;
    const AffineMap& map = mesh.maps[c];
    const Mat G = map.Binv * map.Binv.transpose();

    // stiffness of reference monomial gradients pulled back through the
    // affine map, exact polynomial integrals
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nm + 1, nm + 1);
    for (int i = 0; i < nm; ++i)
      for (int j = 0; j < nm; ++j) {
        double s = 0;
        for (int k = 0; k < mesh.dim; ++k)
          for (int l = 0; l < mesh.dim; ++l)
            s += G(k, l) * (monos[i].derivative(k) * monos[j].derivative(l)).integral(shape);
        A(i, j) = map.det * s;
      }
    for (int i = 0; i < nm; ++i) {
      double ci = map.det * monos[i].integral(shape);  // mean-value constraint
      A(i, nm) = ci;
      A(nm, i) = ci;
    }

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nm + 1);
    const auto& rule = cell_gauss(shape, quad_degree);
    const auto& bp = basis_at_gauss(shape, dm.order, quad_degree);
    for (std::size_t g = 0; g < rule.points.size(); ++g) {
      Vec x = map.apply(rule.points[g]);
      Mat k = data.conductivity(x);
      k.d = mesh.dim;
      Mat kinv = k.inverse();
      Vec vhat{};
      for (int i = 0; i < static_cast<int>(dm.cell_velocity[c].size()); ++i) {
        const auto& [gdof, scale] = dm.cell_velocity[c][i];
        vhat += bp.value[g][i] * (scale * u[gdof]);
      }
      // (K^-1 u_h) . (B^-T grad_hat m) = (B^-1 K^-1 u_h) . grad_hat m
      Vec pulled = map.Binv * (kinv * map.piola(vhat));
      const double w = map.det * rule.weights[g];
      for (int i = 0; i < nm; ++i) {
        Vec grad{monos[i].derivative(0)(rule.points[g]), monos[i].derivative(1)(rule.points[g]),
                 monos[i].derivative(2)(rule.points[g])};
        rhs[i] -= w * dot(pulled, grad);
      }
    }
    // cell mean of p_h
    const auto& def = reference_element(shape, dm.order);
    double mean = 0;
    for (int q = 0; q < def.pressure_count(); ++q)
      mean += p[dm.pressure_offset[c] + q] * def.pressure[q].integral(shape);
    rhs[nm] = map.det * mean;

    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (!lu.isInvertible())
      throw SingularLocalSystem("post-processing system singular on cell " +
                                std::to_string(c));
    Eigen::VectorXd sol = lu.solve(rhs);
    out.coeffs[c] = sol.head(nm);
  }
  return out;
}

CellwisePoly project_pressure(const Mesh& mesh, int degree,
                              const std::function<double(const Vec&)>& field,
                              int quad_degree) {
  if (degree < 0 || degree > 1) throw InvalidInput("projection degree must be 0 or 1");
  const auto& monos = pk_monomials(mesh.dim, degree);
  const int nm = static_cast<int>(monos.size());
  CellwisePoly out;
  out.degree = degree;
  out.coeffs.resize(mesh.num_cells());

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellShape shape = mesh.cells[c].shape;
    const AffineMap& map = mesh.maps[c];
    Eigen::MatrixXd mass(nm, nm);
    for (int i = 0; i < nm; ++i)
      for (int j = 0; j < nm; ++j)
        mass(i, j) = map.det * (monos[i] * monos[j]).integral(shape);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nm);
    const auto& rule = cell_gauss(shape, quad_degree);
    for (std::size_t g = 0; g < rule.points.size(); ++g) {
      const double w = map.det * rule.weights[g] * field(map.apply(rule.points[g]));
      for (int i = 0; i < nm; ++i) rhs[i] += w * monos[i](rule.points[g]);
    }
    out.coeffs[c] = mass.ldlt().solve(rhs);
  }
  return out;
}

ErrorReport error_norms(const Mesh& mesh, const DofMap& dm, const ExactFields& exact,
                        const Eigen::VectorXd& u, const Eigen::VectorXd& p,
                        const CellwisePoly* post, int quad_degree) {
  ErrorReport rep;
  rep.dof_u = dm.n_velocity;
  rep.dof_p = dm.n_pressure;
  rep.h = mesh.h;

  double e_u = 0, e_div = 0, e_p = 0, e_proj0 = 0, e_post = 0;
  double n_u = 0, n_div = 0, n_p = 0;

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellShape shape = mesh.cells[c].shape;
    const auto& def = reference_element(shape, dm.order);
    const AffineMap& map = mesh.maps[c];
    const auto& rule = cell_gauss(shape, quad_degree);
    const auto& bp = basis_at_gauss(shape, dm.order, quad_degree);

    double p_mean_err = 0;  // integral of (p - p_h) over the cell
    for (std::size_t g = 0; g < rule.points.size(); ++g) {
      const double w = map.det * rule.weights[g];
      Vec x = map.apply(rule.points[g]);

      Vec vhat{};
      double div_hat = 0;
      for (int i = 0; i < static_cast<int>(dm.cell_velocity[c].size()); ++i) {
        const auto& [gdof, scale] = dm.cell_velocity[c][i];
        vhat += bp.value[g][i] * (scale * u[gdof]);
        div_hat += bp.div[g][i] * scale * u[gdof];
      }
      Vec uh = map.piola(vhat);
      double div_uh = div_hat / map.det;
      double ph = 0;
      for (int q = 0; q < def.pressure_count(); ++q)
        ph += p[dm.pressure_offset[c] + q] * def.pressure[q](rule.points[g]);

      Vec ue = exact.u(x);
      double divue = exact.div_u(x);
      double pe = exact.p(x);
      e_u += w * dot(ue - uh, ue - uh);
      n_u += w * dot(ue, ue);
      e_div += w * (divue - div_uh) * (divue - div_uh);
      n_div += w * divue * divue;
      e_p += w * (pe - ph) * (pe - ph);
      n_p += w * pe * pe;
      p_mean_err += w * (pe - ph);
      if (post) {
        double pt = post->eval(mesh, c, rule.points[g]);
        e_post += w * (pe - pt) * (pe - pt);
      }
    }
    const double cell_vol = map.det * ref_cell(shape).volume;
    e_proj0 += p_mean_err * p_mean_err / cell_vol;
  }

  auto rel = [](double e2, double n2) {
    double e = std::sqrt(std::max(e2, 0.0)), n = std::sqrt(std::max(n2, 0.0));
    return n > 1e-14 ? e / n : e;
  };
  rep.err_u = rel(e_u, n_u);
  rep.err_div = rel(e_div, n_div);
  rep.err_p = rel(e_p, n_p);
  rep.err_proj0 = rel(e_proj0, n_p);
  rep.err_post = post ? rel(e_post, n_p) : 0.0;
  return rep;
}

std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& hs) {
  if (errors.size() != hs.size() || errors.size() < 2)
    throw DegenerateSequence("need at least two records with matching sizes");
  std::vector<double> orders;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    if (!(hs[i + 1] < hs[i]))
      throw DegenerateSequence("mesh sizes must strictly decrease");
    if (!(errors[i] > 0.0) || !(errors[i + 1] > 0.0))
      throw DegenerateSequence("zero error makes the order undefined");
    orders.push_back(std::log(errors[i] / errors[i + 1]) / std::log(hs[i] / hs[i + 1]));
  }
  return orders;
}

}  // namespace mpflux
