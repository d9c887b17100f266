import java.lang.reflect.Method;

public class EntityUtils {
    private static Method cachedGetter;
    private static Method cachedSetter;

    public static Method getMethod(Class<?> entityClass, String property) {
        return cachedGetter;
    }

    public static Method getSetter(Method getter) {
        return cachedSetter;
    }
}
