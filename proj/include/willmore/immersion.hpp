#pragma once

// Immersions U subset R^n -> R^{n+1} that report Taylor jets of their
// components.  Analytic immersions propagate jets exactly; the finite
// difference supplier rebuilds the jet from point samples.

#include <functional>
#include <memory>

#include "willmore/jet.hpp"
#include "willmore/linalg.hpp"

namespace willmore {

using JetMap = std::function<JetVec(const JetVec&)>;
using JetScalar = std::function<Jet(const JetVec&)>;

class Immersion {
 public:
  virtual ~Immersion() = default;
  virtual int dim() const = 0;
  // The n+1 components as jets of the given order around x.
  virtual JetVec jet(const Vec& x, int order) const = 0;
  Vec value(const Vec& x) const;
};

using ImmersionPtr = std::shared_ptr<const Immersion>;

class ClosedFormImmersion : public Immersion {
 public:
  ClosedFormImmersion(int n, JetMap map) : n_(n), map_(std::move(map)) {}
  int dim() const override { return n_; }
  JetVec jet(const Vec& x, int order) const override;

 private:
  int n_;
  JetMap map_;
};

// Partials up to order 3 by 4th-order central differences with step h.
class FiniteDifferenceImmersion : public Immersion {
 public:
  FiniteDifferenceImmersion(ImmersionPtr base, double h) : base_(std::move(base)), h_(h) {}
  int dim() const override { return base_->dim(); }
  JetVec jet(const Vec& x, int order) const override;

 private:
  ImmersionPtr base_;
  double h_;
};

// Unit normal of an immersion as jets of the given order (needs order+1 of r).
JetVec normal_jet(const JetVec& r_high, int orientation);

// r_t = r + t u N.
class NormalVariation : public Immersion {
 public:
  NormalVariation(ImmersionPtr base, JetScalar u, double t, int orientation)
      : base_(std::move(base)), u_(std::move(u)), t_(t), orientation_(orientation) {}
  int dim() const override { return base_->dim(); }
  JetVec jet(const Vec& x, int order) const override;

 private:
  ImmersionPtr base_;
  JetScalar u_;
  double t_;
  int orientation_;
};

// Ambient map applied after the immersion: x -> c x (homothety) or x/|x|^2.
class AmbientImage : public Immersion {
 public:
  enum class Kind { Homothety, Inversion };
  AmbientImage(ImmersionPtr base, Kind kind, double scale = 1.0)
      : base_(std::move(base)), kind_(kind), scale_(scale) {}
  int dim() const override { return base_->dim(); }
  JetVec jet(const Vec& x, int order) const override;

 private:
  ImmersionPtr base_;
  Kind kind_;
  double scale_;
};

// r o phi for a change of chart phi (jets in, jets out).
class Reparametrized : public Immersion {
 public:
  Reparametrized(ImmersionPtr base, JetMap phi) : base_(std::move(base)), phi_(std::move(phi)) {}
  int dim() const override { return base_->dim(); }
  JetVec jet(const Vec& x, int order) const override;

 private:
  ImmersionPtr base_;
  JetMap phi_;
};

// Compose a jet-valued function of jets evaluated at the jets' base point.
// Used to push a seeded jet through a map whose own jets are known.
JetVec compose_jets(const JetVec& outer_at_inner_value, const JetVec& inner);

}  // namespace willmore
