#pragma once

#include "wfl/error.hpp"
#include "wfl/partition.hpp"
#include "wfl/linalg.hpp"
#include "wfl/random.hpp"
#include "wfl/frames.hpp"
#include "wfl/weaving.hpp"
#include "wfl/generators.hpp"
#include "wfl/identities.hpp"
#include "wfl/io.hpp"
#include "wfl/verify.hpp"
