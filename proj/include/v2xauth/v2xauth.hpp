#pragma once

#include "v2xauth/analytics.hpp"
#include "v2xauth/bytes.hpp"
#include "v2xauth/curve.hpp"
#include "v2xauth/drbg.hpp"
#include "v2xauth/errors.hpp"
#include "v2xauth/gm_store.hpp"
#include "v2xauth/report.hpp"
#include "v2xauth/scheme.hpp"
#include "v2xauth/sha512.hpp"
#include "v2xauth/simulator.hpp"
#include "v2xauth/wire.hpp"
