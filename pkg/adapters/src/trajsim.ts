import { serve } from './protocol.js';
import { trajectoryEngine } from './trajectory.js';

serve(trajectoryEngine);
