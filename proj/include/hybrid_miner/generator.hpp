#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "event_log.hpp"

namespace hybrid_miner {

// Synthetic order-handling process: place order, send invoice, any number of
// reminders, then either cancel or pay followed by (prepare delivery ->
// make delivery) concurrent with confirm payment. A small fraction of paid
// orders are paid before the invoice is sent.
struct OrderHandlingOptions {
  std::size_t cases = 12666;
  // Exact number of events (without ▷/□); reached by adding or removing
  // reminders in randomly chosen cases.
  std::optional<std::uint64_t> events;
  double cancel_probability = 0.2;
  double reminder_probability = 0.5;  // chance of one more reminder
  double pay_before_invoice_probability = 37.0 / 12666.0;
};

namespace order_activities {
inline const std::string place_order = "place order";
inline const std::string send_invoice = "send invoice";
inline const std::string send_reminder = "send reminder";
inline const std::string pay = "pay";
inline const std::string cancel_order = "cancel order";
inline const std::string prepare_delivery = "prepare delivery";
inline const std::string make_delivery = "make delivery";
inline const std::string confirm_payment = "confirm payment";
}  // namespace order_activities

inline std::vector<std::vector<std::string>> generate_order_handling_traces(const OrderHandlingOptions& options,
                                                                            std::uint64_t seed) {
  namespace act = order_activities;
  if (options.cases == 0) throw ParameterError("cases", "must be positive");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution cancel(options.cancel_probability);
  std::bernoulli_distribution another_reminder(options.reminder_probability);
  std::bernoulli_distribution early_payment(options.pay_before_invoice_probability);
  std::uniform_int_distribution<int> interleaving(0, 2);

  struct Case {
    bool early = false;
    bool cancelled = false;
    std::size_t reminders = 0;
    int order = 0;
  };
  std::vector<Case> cases(options.cases);
  for (auto& c : cases) {
    c.early = early_payment(rng);
    if (!c.early) {
      while (another_reminder(rng)) ++c.reminders;
      c.cancelled = cancel(rng);
    }
    if (!c.cancelled) c.order = interleaving(rng);
  }

  auto length = [](const Case& c) -> std::uint64_t { return c.cancelled ? 3 + c.reminders : 6 + c.reminders; };
  if (options.events) {
    std::uint64_t total = 0;
    for (const auto& c : cases) total += length(c);
    std::uint64_t minimum = 0;
    for (const auto& c : cases) minimum += length(c) - c.reminders;
    if (*options.events < minimum) throw ParameterError("events", "fewer events than the cases require");
    std::uniform_int_distribution<std::size_t> pick(0, cases.size() - 1);
    bool any_regular = std::any_of(cases.begin(), cases.end(), [](const Case& c) { return !c.early; });
    if (*options.events > total && !any_regular)
      throw ParameterError("events", "no case can take additional reminders");
    while (total < *options.events) {
      auto& c = cases[pick(rng)];
      if (c.early) continue;
      ++c.reminders;
      ++total;
    }
    while (total > *options.events) {
      auto& c = cases[pick(rng)];
      if (c.reminders == 0) continue;
      --c.reminders;
      --total;
    }
  }

  std::vector<std::vector<std::string>> traces;
  traces.reserve(cases.size());
  for (const auto& c : cases) {
    std::vector<std::string> t{act::place_order};
    if (c.early) {
      t.push_back(act::pay);
      t.push_back(act::send_invoice);
    } else {
      t.push_back(act::send_invoice);
      t.insert(t.end(), c.reminders, act::send_reminder);
      t.push_back(c.cancelled ? act::cancel_order : act::pay);
    }
    if (!c.cancelled) {
      switch (c.order) {
        case 0: t.insert(t.end(), {act::confirm_payment, act::prepare_delivery, act::make_delivery}); break;
        case 1: t.insert(t.end(), {act::prepare_delivery, act::confirm_payment, act::make_delivery}); break;
        default: t.insert(t.end(), {act::prepare_delivery, act::make_delivery, act::confirm_payment}); break;
      }
    }
    traces.push_back(std::move(t));
  }
  return traces;
}

inline EventLog generate_order_handling(const OrderHandlingOptions& options, std::uint64_t seed) {
  LogBuilder builder;
  for (const auto& t : generate_order_handling_traces(options, seed)) builder.add(t);
  return std::move(builder).build();
}

}  // namespace hybrid_miner
