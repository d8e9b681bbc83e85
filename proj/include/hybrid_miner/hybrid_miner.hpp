#pragma once

// Umbrella header for the discovery library (everything except the HTTP
// service, which pulls in cpp-httplib).

#include "activity.hpp"
#include "causal_graph.hpp"
#include "conformance.hpp"
#include "csv_reader.hpp"
#include "errors.hpp"
#include "event_log.hpp"
#include "export.hpp"
#include "generator.hpp"
#include "log_stats.hpp"
#include "log_io.hpp"
#include "log_writer.hpp"
#include "petri_net.hpp"
#include "place_discovery.hpp"
#include "serialization.hpp"
#include "session.hpp"
#include "xes_reader.hpp"
