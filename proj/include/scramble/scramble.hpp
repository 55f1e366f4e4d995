#pragma once

#include "scramble/types.hpp"
#include "scramble/spin_algebra.hpp"
#include "scramble/spectral.hpp"
#include "scramble/scrambling.hpp"
#include "scramble/tpm.hpp"
#include "scramble/sampler.hpp"
