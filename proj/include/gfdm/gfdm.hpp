#pragma once

#include <gfdm/channel.hpp>
#include <gfdm/checks.hpp>
#include <gfdm/config.hpp>
#include <gfdm/errors.hpp>
#include <gfdm/lmmse.hpp>
#include <gfdm/modem.hpp>
#include <gfdm/numerics.hpp>
#include <gfdm/pilot.hpp>
#include <gfdm/report.hpp>
#include <gfdm/sim.hpp>
