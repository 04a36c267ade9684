#include "bioconv/model.hpp"

#include <cmath>

namespace bioconv {

ViscosityProfile eval_viscosity_profile(const std::string& name) {
  if (name == "exp-decay") {
    return {name, [](double s) { return std::exp(-s); }, [](double s) { return -std::exp(-s); }};
  }
  double nu = 1.0;
  if (name.rfind("constant(", 0) == 0 && name.size() > 10 && name.back() == ')') {
    const std::string arg = name.substr(9, name.size() - 10);
    std::size_t used = 0;
    try {
      nu = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != arg.size()) throw ParameterError("bad viscosity constant in '" + name + "'");
  } else if (name != "constant") {
    throw ParameterError("unknown viscosity profile '" + name + "'");
  }
  if (!(nu > 0.0)) throw ParameterError("viscosity constant must be positive");
  return {name, [nu](double) { return nu; }, [](double) { return 0.0; }};
}

void ModelData::validate() const {
  if (!mu || !dmu) throw ParameterError("viscosity and its derivative must be given");
  if (kappa < 0.0 || g < 0.0 || U < 0.0 || alpha < 0.0) {
    throw ParameterError("kappa, g, U and alpha must be nonnegative");
  }
}

}  // namespace bioconv
