#pragma once

#include "sololab/bitstring.hpp"
#include "sololab/dyadic.hpp"
#include "sololab/errors.hpp"
#include "sololab/gap.hpp"
#include "sololab/kc_allocator.hpp"
#include "sololab/machine_enum.hpp"
#include "sololab/mixture.hpp"
#include "sololab/semimeasure.hpp"
#include "sololab/tm_core.hpp"
#include "sololab/tm_text.hpp"
#include "sololab/weights.hpp"
