import java.util.ArrayList;
import java.util.List;

public class Resolver {
    private Class<?>[] candidates;

    public Resolver() {
        this.candidates = new Class<?>[] { ImplOne.class, ImplTwo.class, Base.class };
    }

    public List<Class> findImplementations(Class base) {
        List<Class> implementations = new ArrayList<Class>();
        for (Class candidate : candidates) {
            if (!candidate.equals(base) && base.isAssignableFrom(candidate)) {
                implementations.add(candidate);
            }
        }
        return implementations;
    }
}
