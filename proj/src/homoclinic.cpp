#include "mixkit/homoclinic.hpp"

namespace mixkit {

HomoclinicDatum<Vec2> toral_datum(const ToralAutomorphism& f, const ToralHomoclinic& h, double delta,
                                  std::int64_t back, std::int64_t fwd) {
  std::vector<Vec2> orbit;
  for (const auto& r : h.orbit) orbit.push_back(r.value());
  return make_datum<Vec2>(std::move(orbit), [&](std::int64_t j) { return h.point(f, j); }, delta, back, fwd);
}

HomoclinicDatum<ShiftPoint> symbolic_datum(const SymbolicHomoclinic& h, double delta, std::int64_t back,
                                           std::int64_t fwd) {
  const auto base = ShiftPoint::periodic(h.p);
  std::vector<ShiftPoint> orbit;
  for (std::size_t k = 0; k < h.p.size(); ++k) orbit.push_back(base.shifted(static_cast<std::int64_t>(k)));
  return make_datum<ShiftPoint>(std::move(orbit), [&](std::int64_t j) { return h.q.shifted(j); }, delta, back,
                                fwd);
}

}  // namespace mixkit
