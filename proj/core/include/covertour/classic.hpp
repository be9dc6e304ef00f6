#pragma once

#include <functional>
#include <memory>

#include "covertour/policy.hpp"

namespace covertour {

/// Offline tour solver used inside the online policies.
enum class SolverKind { Exact, Approx };

/// Recomputes a fastest tour from the current position through all released
/// unserved requests to the origin at every release. A ride in progress is
/// completed first.
class ReplanPolicy : public OnlinePolicy {
 public:
  explicit ReplanPolicy(SolverKind solver = SolverKind::Exact, double nu = 2.0);
  std::string name() const override;
  double certified_ratio() const override;
  void start(Controller&) override {}
  void on_release(Controller& c, int i) override;

 private:
  void recompute(Controller& c);
  SolverKind solver_;
  double nu_;
};

/// Commits to a tour whenever idle at the origin with released unserved
/// requests; releases during a tour are ignored until back home.
class IgnorePolicy : public OnlinePolicy {
 public:
  explicit IgnorePolicy(SolverKind solver = SolverKind::Exact, double nu = 2.0);
  std::string name() const override;
  void start(Controller&) override {}
  void on_release(Controller& c, int i) override;
  void on_plan_complete(Controller& c) override;

 private:
  void commit(Controller& c);
  SolverKind solver_;
  double nu_;
  bool touring_ = false;
};

/// Waiting policy: at the origin at time t with unserved set S, depart on the
/// optimal tour iff its length l(S) <= t, else sleep until time l(S).
class SmartStartPolicy : public OnlinePolicy {
 public:
  /// Called when the waiting rule first admits a departure; returning false
  /// suppresses it and freezes the policy (used by the trust wrapper).
  using DepartureHook = std::function<bool(double t, double ell)>;

  explicit SmartStartPolicy(SolverKind solver = SolverKind::Exact, double nu = 2.0);
  std::string name() const override;
  double certified_ratio() const override;
  void start(Controller&) override {}
  void on_release(Controller& c, int i) override;
  void on_wake(Controller& c, int tag) override;
  void on_plan_complete(Controller& c) override;

  void set_departure_hook(DepartureHook hook) { hook_ = std::move(hook); }
  bool touring() const { return touring_; }
  bool frozen() const { return frozen_; }
  void freeze() { frozen_ = true; }
  /// Re-evaluates the waiting rule; only meaningful at the origin.
  void decide(Controller& c);

 private:
  SolverKind solver_;
  double nu_;
  DepartureHook hook_;
  bool touring_ = false;
  bool frozen_ = false;
};

/// Half-line policy: move right while a released unserved request lies
/// strictly right of the server, otherwise move toward the origin.
class MrinPolicy : public OnlinePolicy {
 public:
  std::string name() const override { return "mrin"; }
  double certified_ratio() const override { return 1.5; }
  void start(Controller& c) override;
  void on_release(Controller& c, int i) override;
  void on_plan_complete(Controller& c) override;

  bool frozen() const { return frozen_; }
  void freeze() { frozen_ = true; }
  void unfreeze() { frozen_ = false; }
  void recompute(Controller& c);

 private:
  bool frozen_ = false;
};

std::unique_ptr<OnlinePolicy> make_replan(SolverKind solver = SolverKind::Exact, double nu = 2.0);
std::unique_ptr<OnlinePolicy> make_ignore(SolverKind solver = SolverKind::Exact, double nu = 2.0);
std::unique_ptr<SmartStartPolicy> make_smartstart(SolverKind solver = SolverKind::Exact,
                                                  double nu = 2.0);
std::unique_ptr<MrinPolicy> make_mrin();

/// SmartStart's ratio with a nu-approximate tour solver.
double approx_smartstart_ratio(double nu);

}  // namespace covertour
